//! Square matrices over the ambient field and enumeration of the finite
//! groups they generate.
//!
//! Vectors are columns and matrices act on the left. Column `j` of a matrix
//! is the image of the `j`-th basis vector; the polynomial action in
//! [`crate::poly`] uses the same convention.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::ffield::{Fe, Field, FieldError};
use crate::linalg::Echelon;
use crate::text::Cursor;

/// Default enumeration budget for [`group_closure`].
pub const DEFAULT_CAP: usize = 1_000_000;
/// Default bound on `|F|^n` for [`is_irreducible`].
pub const DEFAULT_STATE_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatError {
    #[error("index {index} out of range for dimension {n}")]
    IndexError { index: usize, n: usize },
    #[error("transvection needs distinct indices, got ({0}, {0})")]
    EqualIndices(usize),
    #[error("diagonal scalar must be nonzero")]
    ZeroScalar,
    #[error("matrix is singular")]
    Singular,
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("matrices over different fields")]
    ContextMismatch,
    #[error("generator {0} is singular")]
    SingularGenerator(usize),
    #[error("group has more than {cap} elements (too large or infinite at this budget)")]
    ClosureCapExceeded { cap: usize },
    #[error("state space |F|^n = {size} exceeds the cap {cap}")]
    StateSpaceTooLarge { size: u64, cap: u64 },
    #[error("matrix text: {0}")]
    Field(#[from] FieldError),
    #[error("matrix text: {0}")]
    Shape(String),
}

/// An `n x n` matrix, row-major.
#[derive(Clone)]
pub struct Matrix {
    field: Field,
    n: usize,
    data: Vec<Fe>,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.data == other.data && self.field == other.field
    }
}

impl Eq for Matrix {}

impl std::hash::Hash for Matrix {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.data.hash(state);
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[{self}]")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            if i > 0 {
                f.write_str(";")?;
            }
            for j in 0..self.n {
                if j > 0 {
                    f.write_str(",")?;
                }
                f.write_str(&self.field.format(self.get(i, j)))?;
            }
        }
        Ok(())
    }
}

impl Matrix {
    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut data = vec![Fe::ZERO; n * n];
        for i in 0..n {
            data[i * n + i] = Fe::ONE;
        }
        Matrix {
            field: field.clone(),
            n,
            data,
        }
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<Fe>>) -> Result<Matrix, MatError> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(MatError::SizeMismatch(bad.len(), n));
        }
        Ok(Matrix {
            field: field.clone(),
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn diag(field: &Field, entries: &[Fe]) -> Matrix {
        let mut m = Matrix::identity(field, entries.len());
        for (i, &a) in entries.iter().enumerate() {
            m.set(i, i, a);
        }
        m
    }

    /// `T_ij(a)`: the identity plus `a` at row `i`, column `j`, so that
    /// `x_j -> x_j + a x_i`. Indices are 0-based.
    pub fn transvection(field: &Field, n: usize, i: usize, j: usize, a: Fe) -> Result<Matrix, MatError> {
        for index in [i, j] {
            if index >= n {
                return Err(MatError::IndexError { index, n });
            }
        }
        if i == j {
            return Err(MatError::EqualIndices(i));
        }
        let mut m = Matrix::identity(field, n);
        m.set(i, j, a);
        Ok(m)
    }

    /// `D_i(a)`: the identity with `a` at `(i, i)`. 0-based.
    pub fn diagonal(field: &Field, n: usize, i: usize, a: Fe) -> Result<Matrix, MatError> {
        if i >= n {
            return Err(MatError::IndexError { index: i, n });
        }
        if a.is_zero() {
            return Err(MatError::ZeroScalar);
        }
        let mut m = Matrix::identity(field, n);
        m.set(i, i, a);
        Ok(m)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Fe] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, a: Fe) {
        self.data[i * self.n + j] = a;
    }

    pub fn column(&self, j: usize) -> Vec<Fe> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == if i == j { Fe::ONE } else { Fe::ZERO }))
    }

    fn check(&self, other: &Matrix) -> Result<(), MatError> {
        if self.n != other.n {
            return Err(MatError::SizeMismatch(self.n, other.n));
        }
        if self.field != other.field {
            return Err(MatError::ContextMismatch);
        }
        Ok(())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, MatError> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Matrix) -> Matrix {
        let n = self.n;
        let f = &self.field;
        let mut data = vec![Fe::ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.data[k * n + j];
                    if !b.is_zero() {
                        let cell = &mut data[i * n + j];
                        *cell = f.add(*cell, f.mul(a, b));
                    }
                }
            }
        }
        Matrix {
            field: f.clone(),
            n,
            data,
        }
    }

    pub fn apply(&self, v: &[Fe]) -> Result<Vec<Fe>, MatError> {
        if v.len() != self.n {
            return Err(MatError::SizeMismatch(self.n, v.len()));
        }
        let f = &self.field;
        Ok((0..self.n)
            .map(|i| {
                (0..self.n).fold(Fe::ZERO, |acc, j| f.add(acc, f.mul(self.get(i, j), v[j])))
            })
            .collect())
    }

    pub fn det(&self) -> Fe {
        let f = &self.field;
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = Fe::ONE;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return Fe::ZERO;
            };
            if piv != col {
                for j in 0..n {
                    a.swap(piv * n + j, col * n + j);
                }
                det = f.neg(det);
            }
            let p = a[col * n + col];
            det = f.mul(det, p);
            let pinv = f.inv(p).expect("pivot is nonzero");
            for r in col + 1..n {
                let c = f.mul(a[r * n + col], pinv);
                if c.is_zero() {
                    continue;
                }
                for j in col..n {
                    a[r * n + j] = f.sub(a[r * n + j], f.mul(c, a[col * n + j]));
                }
            }
        }
        det
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<Matrix, MatError> {
        let f = &self.field;
        let n = self.n;
        let mut a = self.data.clone();
        let mut inv = Matrix::identity(f, n).data;
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !a[r * n + col].is_zero())
                .ok_or(MatError::Singular)?;
            for j in 0..n {
                a.swap(piv * n + j, col * n + j);
                inv.swap(piv * n + j, col * n + j);
            }
            let pinv = f.inv(a[col * n + col]).expect("pivot is nonzero");
            for j in 0..n {
                a[col * n + j] = f.mul(a[col * n + j], pinv);
                inv[col * n + j] = f.mul(inv[col * n + j], pinv);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let c = a[r * n + col];
                if c.is_zero() {
                    continue;
                }
                for j in 0..n {
                    a[r * n + j] = f.sub(a[r * n + j], f.mul(c, a[col * n + j]));
                    inv[r * n + j] = f.sub(inv[r * n + j], f.mul(c, inv[col * n + j]));
                }
            }
        }
        Ok(Matrix {
            field: f.clone(),
            n,
            data: inv,
        })
    }

    /// The submatrix on the given row and column index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Vec<Vec<Fe>> {
        rows.iter()
            .map(|&i| cols.iter().map(|&j| self.get(i, j)).collect())
            .collect()
    }

    /// The square block on `indices`, as a matrix.
    pub fn principal_block(&self, indices: &[usize]) -> Matrix {
        Matrix {
            field: self.field.clone(),
            n: indices.len(),
            data: self.submatrix(indices, indices).into_iter().flatten().collect(),
        }
    }

    /// `c^{-1} self c`.
    pub fn conjugate(&self, c: &Matrix, c_inv: &Matrix) -> Matrix {
        c_inv.mul_unchecked(self).mul_unchecked(c)
    }

    /// Parses rows separated by `;` and entries by `,`.
    pub fn parse(field: &Field, text: &str) -> Result<Matrix, MatError> {
        let mut rows = Vec::new();
        for row in text.split(';') {
            let entries = row
                .split(',')
                .map(|e| field.parse_element(e))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(entries);
        }
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(MatError::Shape(format!("'{text}' is not square")));
        }
        Matrix::from_rows(field, rows)
    }
}

/// `|GL(n, F_q)| = prod_{i<n} (q^n - q^i)`.
pub fn gl_order(n: u32, q: u64) -> u128 {
    let q = u128::from(q);
    (0..n).map(|i| q.pow(n) - q.pow(i)).product()
}

/// `|SL(n, F_q)| = |GL(n, F_q)| / (q - 1)`.
pub fn sl_order(n: u32, q: u64) -> u128 {
    gl_order(n, q) / (u128::from(q) - 1)
}

/// A fully enumerated finite matrix group.
#[derive(Clone)]
pub struct GroupClosure {
    field: Field,
    n: usize,
    generators: Vec<Matrix>,
    elements: Vec<Matrix>,
    index: HashMap<Vec<Fe>, usize>,
}

impl fmt::Debug for GroupClosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GroupClosure {{ n: {}, order: {}, generators: {:?} }}",
            self.n,
            self.elements.len(),
            self.generators
        )
    }
}

fn layer_key(m: &Matrix) -> (u64, &[Fe]) {
    (m.data.iter().map(|a| u64::from(a.index())).sum(), &m.data)
}

/// Breadth-first closure of `generators` under left multiplication.
///
/// Elements are ordered by BFS layer, then within a layer by the sum of the
/// entry indices and lexicographically. Fails once more than `cap` elements
/// have been found.
pub fn group_closure(
    field: &Field,
    n: usize,
    generators: &[Matrix],
    cap: usize,
) -> Result<GroupClosure, MatError> {
    for (k, g) in generators.iter().enumerate() {
        if g.n != n {
            return Err(MatError::SizeMismatch(n, g.n));
        }
        if g.field != *field {
            return Err(MatError::ContextMismatch);
        }
        if g.det().is_zero() {
            return Err(MatError::SingularGenerator(k));
        }
    }
    let identity = Matrix::identity(field, n);
    let mut seen: HashSet<Vec<Fe>> = HashSet::from([identity.data.clone()]);
    let mut elements = vec![identity];
    let mut layer_start = 0;
    while layer_start < elements.len() {
        let layer_end = elements.len();
        let mut next = Vec::new();
        for h in &elements[layer_start..layer_end] {
            for g in generators {
                let m = g.mul_unchecked(h);
                if seen.insert(m.data.clone()) {
                    if seen.len() > cap {
                        return Err(MatError::ClosureCapExceeded { cap });
                    }
                    next.push(m);
                }
            }
        }
        next.sort_by(|a, b| layer_key(a).cmp(&layer_key(b)));
        elements.extend(next);
        layer_start = layer_end;
    }
    Ok(GroupClosure::from_parts(field, n, generators.to_vec(), elements))
}

impl GroupClosure {
    fn from_parts(field: &Field, n: usize, generators: Vec<Matrix>, elements: Vec<Matrix>) -> Self {
        let index = elements
            .iter()
            .enumerate()
            .map(|(k, m)| (m.data.clone(), k))
            .collect();
        GroupClosure {
            field: field.clone(),
            n,
            generators,
            elements,
            index,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        m.n == self.n && self.index.contains_key(&m.data)
    }

    pub fn contains_entries(&self, entries: &[Fe]) -> bool {
        self.index.contains_key(entries)
    }

    pub fn position(&self, m: &Matrix) -> Option<usize> {
        self.index.get(&m.data).copied()
    }

    /// The group `c^{-1} G c`, keeping the element order of `self`.
    pub fn conjugate(&self, c: &Matrix) -> Result<GroupClosure, MatError> {
        let c_inv = c.inverse()?;
        let generators = self.generators.iter().map(|g| g.conjugate(c, &c_inv)).collect();
        let elements = self.elements.iter().map(|g| g.conjugate(c, &c_inv)).collect();
        Ok(GroupClosure::from_parts(&self.field, self.n, generators, elements))
    }

    /// The group generated by the principal blocks of the generators on
    /// `indices`. For a diagonal block of a block upper triangular group this
    /// is the image of the restriction homomorphism.
    pub fn diagonal_block_group(&self, indices: &[usize], cap: usize) -> Result<GroupClosure, MatError> {
        let gens: Vec<Matrix> = self.generators.iter().map(|g| g.principal_block(indices)).collect();
        let mut unique = Vec::new();
        let mut seen = HashSet::new();
        for g in gens {
            if !g.is_identity() && seen.insert(g.data.clone()) {
                unique.push(g);
            }
        }
        group_closure(&self.field, indices.len(), &unique, cap)
    }
}

/// The orbit `{g v : g in G}` in lexicographic order.
pub fn orbit(group: &GroupClosure, v: &[Fe]) -> Result<Vec<Vec<Fe>>, MatError> {
    if v.len() != group.n {
        return Err(MatError::SizeMismatch(group.n, v.len()));
    }
    let mut out: Vec<Vec<Fe>> = group
        .elements
        .iter()
        .map(|g| g.apply(v).expect("size checked"))
        .collect::<HashSet<_>>()
        .into_iter()
        .collect();
    out.sort();
    Ok(out)
}

/// The smallest `G`-stable subspace containing `v`, as an echelon basis.
pub fn submodule_generated(group: &GroupClosure, v: &[Fe]) -> Echelon {
    let mut space = Echelon::new(&group.field, group.n);
    let mut queue = vec![v.to_vec()];
    while let Some(w) = queue.pop() {
        if space.insert(w.clone()) {
            for g in &group.generators {
                queue.push(g.apply(&w).expect("size checked"));
            }
        }
    }
    space
}

/// Whether no proper nonzero subspace is stable, by exhausting one vector
/// per line of `F^n`.
pub fn is_irreducible(group: &GroupClosure, state_cap: u64) -> Result<bool, MatError> {
    let q = u64::from(group.field.size());
    let size = (q as u128).pow(group.n as u32);
    if size > u128::from(state_cap) {
        return Err(MatError::StateSpaceTooLarge {
            size: u64::try_from(size).unwrap_or(u64::MAX),
            cap: state_cap,
        });
    }
    let n = group.n;
    for code in 1..size as u64 {
        let mut v = Vec::with_capacity(n);
        let mut c = code;
        for _ in 0..n {
            v.push(group.field.element((c % q) as u32).expect("in range"));
            c /= q;
        }
        // one representative per line: first nonzero coordinate equal to one
        if v.iter().find(|a| !a.is_zero()) != Some(&Fe::ONE) {
            continue;
        }
        if submodule_generated(group, &v).rank() < n {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Reads a matrix-group file: a `field ...` line followed by one matrix per
/// line. Blank lines and `#` comments are ignored.
pub fn parse_generator_file(text: &str) -> Result<(Field, Vec<Matrix>), (usize, MatError)> {
    let mut field: Option<Field> = None;
    let mut mats = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let here = |e: MatError| (lineno + 1, e);
        if let Some(rest) = line.strip_prefix("field") {
            let mut cur = Cursor::new(rest);
            let f = Field::parse_cursor(&mut cur).map_err(|e| here(e.into()))?;
            cur.finish().map_err(|e| here(FieldError::from(e).into()))?;
            field = Some(f);
            continue;
        }
        let f = field
            .as_ref()
            .ok_or_else(|| here(MatError::Shape("a 'field' line must come first".into())))?;
        let m = Matrix::parse(f, line).map_err(here)?;
        if let Some(first) = mats.first() {
            let first: &Matrix = first;
            if first.n != m.n {
                return Err(here(MatError::SizeMismatch(first.n, m.n)));
            }
        }
        mats.push(m);
    }
    let field = field.ok_or((0, MatError::Shape("missing 'field' line".into())))?;
    Ok((field, mats))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::prime(2).unwrap()
    }

    fn gf4() -> Field {
        Field::new(2, 2, &[1, 1, 1]).unwrap()
    }

    fn unitriangular3() -> GroupClosure {
        let f = f2();
        let gens = vec![
            Matrix::transvection(&f, 3, 0, 1, Fe::ONE).unwrap(),
            Matrix::transvection(&f, 3, 0, 2, Fe::ONE).unwrap(),
            Matrix::transvection(&f, 3, 1, 2, Fe::ONE).unwrap(),
        ];
        group_closure(&f, 3, &gens, DEFAULT_CAP).unwrap()
    }

    #[test]
    fn transvection_and_diagonal_shapes() {
        let f = f2();
        let t = Matrix::transvection(&f, 2, 0, 1, Fe::ONE).unwrap();
        assert_eq!(t.to_string(), "1,1;0,1");
        assert!(Matrix::transvection(&f, 2, 0, 1, Fe::ZERO).unwrap().is_identity());
        let g = gf4();
        let z = g.z().unwrap();
        let t = Matrix::transvection(&g, 3, 2, 0, z).unwrap();
        assert_eq!(t.to_string(), "1,0,0;0,1,0;z,0,1");
        assert_eq!(
            Matrix::transvection(&f, 2, 1, 1, Fe::ONE),
            Err(MatError::EqualIndices(1))
        );
        assert!(matches!(
            Matrix::transvection(&f, 2, 0, 2, Fe::ONE),
            Err(MatError::IndexError { .. })
        ));
        assert!(Matrix::diagonal(&f, 2, 0, Fe::ONE).unwrap().is_identity());
        assert_eq!(Matrix::diagonal(&g, 2, 1, z).unwrap().to_string(), "1,0;0,z");
        assert_eq!(Matrix::diagonal(&f, 2, 0, Fe::ZERO), Err(MatError::ZeroScalar));
    }

    #[test]
    fn products_inverses_determinants() {
        let f = f2();
        let t = Matrix::transvection(&f, 2, 0, 1, Fe::ONE).unwrap();
        assert!(t.mul(&t).unwrap().is_identity());
        assert_eq!(t.det(), Fe::ONE);
        let g = gf4();
        let z = g.z().unwrap();
        let d = Matrix::diag(&g, &[Fe::ONE, z]);
        assert_eq!(d.inverse().unwrap().to_string(), "1,0;0,z+1");
        let singular = Matrix::parse(&g, "1,z;1,z").unwrap();
        assert_eq!(singular.inverse(), Err(MatError::Singular));
        assert_eq!(singular.det(), Fe::ZERO);
        assert!(matches!(t.mul(&d), Err(MatError::ContextMismatch)));
        assert!(matches!(t.mul(&Matrix::identity(&f, 3)), Err(MatError::SizeMismatch(2, 3))));
    }

    #[test]
    fn closure_examples() {
        let f = f2();
        let t12 = Matrix::transvection(&f, 2, 0, 1, Fe::ONE).unwrap();
        let t21 = Matrix::transvection(&f, 2, 1, 0, Fe::ONE).unwrap();
        assert_eq!(group_closure(&f, 2, std::slice::from_ref(&t12), 100).unwrap().order(), 2);
        let gl2 = group_closure(&f, 2, &[t12.clone(), t21.clone()], 100).unwrap();
        assert_eq!(gl2.order(), 6);
        assert_eq!(
            group_closure(&f, 2, &[t12, t21], 5).unwrap_err(),
            MatError::ClosureCapExceeded { cap: 5 }
        );
        let g = gf4();
        let z = g.z().unwrap();
        let order10 = group_closure(
            &g,
            2,
            &[
                Matrix::transvection(&g, 2, 0, 1, z).unwrap(),
                Matrix::transvection(&g, 2, 1, 0, Fe::ONE).unwrap(),
            ],
            100,
        )
        .unwrap();
        assert_eq!(order10.order(), 10);
        assert!(is_irreducible(&order10, DEFAULT_STATE_CAP).unwrap());
        assert!(is_irreducible(&gl2, DEFAULT_STATE_CAP).unwrap());
        let singular = Matrix::parse(&f, "1,1;1,1").unwrap();
        assert_eq!(
            group_closure(&f, 2, &[singular], 10).unwrap_err(),
            MatError::SingularGenerator(0)
        );
    }

    #[test]
    fn closure_is_deterministic_and_closed() {
        let g = unitriangular3();
        assert_eq!(g.order(), 8);
        assert!(g.elements()[0].is_identity());
        let again = unitriangular3();
        assert_eq!(g.elements(), again.elements());
        for a in g.elements() {
            for b in g.elements() {
                assert!(g.contains(&a.mul(b).unwrap()));
            }
        }
    }

    #[test]
    fn orbits() {
        let g = unitriangular3();
        let f = g.field().clone();
        let e = |i: usize| {
            let mut v = vec![Fe::ZERO; 3];
            v[i] = Fe::ONE;
            v
        };
        assert_eq!(orbit(&g, &e(0)).unwrap(), vec![e(0)]);
        assert_eq!(orbit(&g, &e(2)).unwrap().len(), 4);
        let trivial = group_closure(&f, 3, &[], 10).unwrap();
        assert_eq!(orbit(&trivial, &e(1)).unwrap(), vec![e(1)]);
        assert!(orbit(&g, &e(1)[..2]).is_err());
    }

    #[test]
    fn reducible_unipotent_group() {
        let f = f2();
        let u = group_closure(&f, 2, &[Matrix::transvection(&f, 2, 0, 1, Fe::ONE).unwrap()], 10).unwrap();
        assert!(!is_irreducible(&u, DEFAULT_STATE_CAP).unwrap());
        assert!(matches!(
            is_irreducible(&u, 3),
            Err(MatError::StateSpaceTooLarge { size: 4, cap: 3 })
        ));
    }

    #[test]
    fn group_orders() {
        assert_eq!(gl_order(2, 2), 6);
        assert_eq!(gl_order(3, 2), 168);
        assert_eq!(sl_order(2, 3), 24);
        assert_eq!(sl_order(2, 4), 60);
        assert_eq!(gl_order(1, 4), 3);
    }

    #[test]
    fn generator_file() {
        let text = "# Stong\nfield GF(2^3) mod z^3+z+1\n1,1,0;0,1,0;0,0,1\n1,0,1;0,1,0;0,0,1\n1,z,z^2;0,1,0;0,0,1\n";
        let (f, mats) = parse_generator_file(text).unwrap();
        assert_eq!(f.size(), 8);
        assert_eq!(mats.len(), 3);
        assert_eq!(group_closure(&f, 3, &mats, 100).unwrap().order(), 8);
        assert!(parse_generator_file("1,0;0,1\n").is_err());
    }
}
