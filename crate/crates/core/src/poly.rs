//! Sparse multivariate polynomials over the ambient field, the linear action
//! of matrices on them, Jacobians, and q-linearized subspace polynomials.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::ffield::{Fe, Field, FieldError};
use crate::matgroup::Matrix;
use crate::text::{Cursor, TextError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomials have {0} and {1} variables")]
    VariableCountMismatch(usize, usize),
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("polynomials over different fields")]
    ContextMismatch,
    #[error("matrix of size {matrix} cannot act on {nvars} variables")]
    DimensionMismatch { matrix: usize, nvars: usize },
    #[error("expected {nvars} polynomials in {nvars} variables, got {count}")]
    ShapeMismatch { count: usize, nvars: usize },
    #[error("basis element {0} is not a linear form")]
    NotLinear(usize),
    #[error("basis element {0} lies in the span of the previous ones")]
    DependentBasis(usize),
    #[error("{0} is not the order of a subfield")]
    NotASubfieldOrder(u64),
    #[error("variable x{index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Syntax(#[from] TextError),
}

/// An exponent vector. Ordered graded-lexicographically with `x1 > x2 > ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u64>);

impl Monomial {
    pub fn new(exponents: Vec<u64>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u64] {
        &self.0
    }

    pub fn degree(&self) -> u128 {
        self.0.iter().map(|&e| u128::from(e)).sum()
    }

    fn checked_mul(&self, other: &Monomial) -> Result<Monomial, PolyError> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).filter(|&e| e < 1 << 63).ok_or(PolyError::ExponentOverflow))
            .collect::<Result<_, _>>()
            .map(Monomial)
    }

    /// All exponent vectors of total degree `d` in `nvars` variables, in
    /// ascending graded-lex order.
    pub fn all_of_degree(nvars: usize, d: u64) -> Vec<Monomial> {
        fn rec(nvars: usize, d: u64, prefix: &mut Vec<u64>, out: &mut Vec<Monomial>) {
            if prefix.len() + 1 == nvars {
                prefix.push(d);
                out.push(Monomial(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in 0..=d {
                prefix.push(e);
                rec(nvars, d - e, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if d == 0 {
                out.push(Monomial(Vec::new()));
            }
            return out;
        }
        rec(nvars, d, &mut Vec::with_capacity(nvars), &mut out);
        out.sort();
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `x1..xn` with no stored zero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Monomial, Fe>,
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

fn accumulate(field: &Field, terms: &mut BTreeMap<Monomial, Fe>, m: Monomial, c: Fe) {
    if c.is_zero() {
        return;
    }
    match terms.entry(m) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = field.add(*o.get(), c);
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

impl MultiPoly {
    pub fn zero(field: &Field, nvars: usize) -> Self {
        MultiPoly {
            field: field.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &Field, nvars: usize, c: Fe) -> Self {
        let mut p = MultiPoly::zero(field, nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn one(field: &Field, nvars: usize) -> Self {
        MultiPoly::constant(field, nvars, Fe::ONE)
    }

    /// The variable `x_{i+1}` (0-based index `i`).
    pub fn var(field: &Field, nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range");
        let mut e = vec![0; nvars];
        e[i] = 1;
        MultiPoly::term(field, Monomial(e), Fe::ONE)
    }

    pub fn term(field: &Field, monomial: Monomial, c: Fe) -> Self {
        let nvars = monomial.0.len();
        let mut p = MultiPoly::zero(field, nvars);
        if !c.is_zero() {
            p.terms.insert(monomial, c);
        }
        p
    }

    /// `sum_i coeffs[i] x_{i+1}`.
    pub fn linear_form(field: &Field, coeffs: &[Fe]) -> Self {
        let n = coeffs.len();
        let mut p = MultiPoly::zero(field, n);
        for (i, &c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            accumulate(field, &mut p.terms, Monomial(e), c);
        }
        p
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, Fe)> {
        self.terms.iter().rev().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: &Monomial) -> Fe {
        self.terms.get(m).copied().unwrap_or(Fe::ZERO)
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().next_back().map(|m| m.degree() as u64)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    /// The common degree of a nonzero homogeneous polynomial.
    pub fn homogeneous_degree(&self) -> Option<u64> {
        (!self.is_zero() && self.is_homogeneous()).then(|| self.total_degree().unwrap())
    }

    pub fn is_linear_form(&self) -> bool {
        self.homogeneous_degree() == Some(1)
    }

    fn check(&self, other: &MultiPoly) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::VariableCountMismatch(self.nvars, other.nvars));
        }
        if self.field != other.field {
            return Err(PolyError::ContextMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            accumulate(&self.field, &mut out.terms, m.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        self.scale(self.field.neg(Fe::ONE))
    }

    pub fn scale(&self, c: Fe) -> MultiPoly {
        let f = &self.field;
        let mut out = MultiPoly::zero(f, self.nvars);
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(m, &a)| (m.clone(), f.mul(a, c))).collect();
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check(other)?;
        let f = &self.field;
        let mut out = MultiPoly::zero(f, self.nvars);
        for (m1, &c1) in &self.terms {
            for (m2, &c2) in &other.terms {
                accumulate(f, &mut out.terms, m1.checked_mul(m2)?, f.mul(c1, c2));
            }
        }
        Ok(out)
    }

    /// `self^e`, using the Frobenius map for factors of the characteristic.
    pub fn pow(&self, mut e: u64) -> Result<MultiPoly, PolyError> {
        let p = u64::from(self.field.characteristic());
        let mut frob = 1u64;
        while e > 0 && e.is_multiple_of(p) {
            e /= p;
            frob *= p;
        }
        let mut acc = MultiPoly::one(&self.field, self.nvars);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        if frob > 1 {
            acc = acc.frobenius(frob)?;
        }
        Ok(acc)
    }

    /// `self^q` for `q` a power of the characteristic, computed termwise.
    pub fn frobenius(&self, q: u64) -> Result<MultiPoly, PolyError> {
        let p = u64::from(self.field.characteristic());
        let mut r = q;
        while r > 1 && r.is_multiple_of(p) {
            r /= p;
        }
        if r != 1 {
            return Err(PolyError::NotASubfieldOrder(q));
        }
        let f = &self.field;
        let mut out = MultiPoly::zero(f, self.nvars);
        for (m, &c) in &self.terms {
            let e = m
                .0
                .iter()
                .map(|&x| x.checked_mul(q).filter(|&e| e < 1 << 63).ok_or(PolyError::ExponentOverflow))
                .collect::<Result<Vec<_>, _>>()?;
            out.terms.insert(Monomial(e), f.pow(c, q));
        }
        Ok(out)
    }

    /// Substitutes `x_j -> images[j]`; the result lives in the images' ring.
    pub fn substitute(&self, images: &[MultiPoly]) -> Result<MultiPoly, PolyError> {
        Substitution::new(&self.field, images.to_vec())?.apply(self)
    }

    /// `g . f`: substitutes `x_j -> sum_i g_ij x_i` (column `j` of `g`).
    pub fn act(&self, g: &Matrix) -> Result<MultiPoly, PolyError> {
        Substitution::linear(g, self.nvars)?.apply(self)
    }

    /// Formal partial derivative; integer multiples are reduced mod `p`.
    pub fn partial(&self, var: usize) -> MultiPoly {
        let f = &self.field;
        let p = u64::from(f.characteristic());
        let mut out = MultiPoly::zero(f, self.nvars);
        for (m, &c) in &self.terms {
            let e = m.0[var];
            let k = e % p;
            if k == 0 {
                continue;
            }
            let mut m2 = m.0.clone();
            m2[var] -= 1;
            accumulate(f, &mut out.terms, Monomial(m2), f.mul(c, f.from_int(k as i64)));
        }
        out
    }

    /// Moves variable `k` to `map[k]` in a ring with `nvars` variables.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Result<MultiPoly, PolyError> {
        if map.len() != self.nvars {
            return Err(PolyError::VariableCountMismatch(self.nvars, map.len()));
        }
        if let Some(&index) = map.iter().find(|&&k| k >= nvars) {
            return Err(PolyError::VariableOutOfRange { index: index + 1, nvars });
        }
        let mut out = MultiPoly::zero(&self.field, nvars);
        for (m, &c) in &self.terms {
            let mut e = vec![0; nvars];
            for (k, &x) in m.0.iter().enumerate() {
                e[map[k]] += x;
            }
            accumulate(&self.field, &mut out.terms, Monomial(e), c);
        }
        Ok(out)
    }

    /// Indices of the variables that occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect()
    }

    /// Coefficient vector against a list of monomials.
    pub fn coordinates(&self, basis: &[Monomial]) -> Vec<Fe> {
        basis.iter().map(|m| self.coefficient(m)).collect()
    }

    /// Evaluates at a point of `F^n`.
    pub fn evaluate(&self, point: &[Fe]) -> Fe {
        let f = &self.field;
        self.terms.iter().fold(Fe::ZERO, |acc, (m, &c)| {
            let v = m
                .0
                .iter()
                .zip(point)
                .fold(c, |v, (&e, &x)| f.mul(v, f.pow(x, e)));
            f.add(acc, v)
        })
    }

    /// Parses `+`/`-` separated terms such as `(z+1)*x1^2*x3 + 2*x2`.
    pub fn parse(field: &Field, nvars: usize, text: &str) -> Result<MultiPoly, PolyError> {
        let mut cur = Cursor::new(text);
        let mut out = MultiPoly::zero(field, nvars);
        let mut negate = cur.eat(b'-');
        loop {
            let mut coeff = Fe::ONE;
            let mut exps = vec![0u64; nvars];
            loop {
                if cur.peek() == Some(b'x') {
                    cur.bump();
                    let column = cur.column();
                    let index = cur.uint()? as usize;
                    if index == 0 || index > nvars {
                        let _ = column;
                        return Err(PolyError::VariableOutOfRange { index, nvars });
                    }
                    let e = if cur.eat(b'^') { cur.uint()? } else { 1 };
                    exps[index - 1] = exps[index - 1]
                        .checked_add(e)
                        .filter(|&e| e < 1 << 63)
                        .ok_or(PolyError::ExponentOverflow)?;
                } else {
                    let c = field.parse_factor(&mut cur)?;
                    coeff = field.mul(coeff, c);
                }
                if !cur.eat(b'*') {
                    break;
                }
            }
            if negate {
                coeff = field.neg(coeff);
            }
            accumulate(field, &mut out.terms, Monomial(exps), coeff);
            if cur.eat(b'+') {
                negate = false;
            } else if cur.eat(b'-') {
                negate = true;
            } else {
                break;
            }
        }
        cur.finish()?;
        Ok(out)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms() {
            if !first {
                f.write_str("+")?;
            }
            first = false;
            let ctext = self.field.format(c);
            let ctext = if ctext.contains('+') {
                format!("({ctext})")
            } else {
                ctext
            };
            let vars: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{}", i + 1, e)
                    }
                })
                .collect();
            if vars.is_empty() {
                f.write_str(&ctext)?;
            } else if c == Fe::ONE {
                f.write_str(&vars.join("*"))?;
            } else {
                write!(f, "{}*{}", ctext, vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// A ring homomorphism `x_j -> images[j]` with cached powers of the images,
/// for applying the same substitution to many polynomials.
pub struct Substitution {
    field: Field,
    images: Vec<MultiPoly>,
    target_nvars: usize,
    powers: HashMap<(usize, u64), MultiPoly>,
}

impl Substitution {
    pub fn new(field: &Field, images: Vec<MultiPoly>) -> Result<Self, PolyError> {
        let target_nvars = images.first().map_or(0, |p| p.nvars);
        for p in &images {
            if p.nvars != target_nvars {
                return Err(PolyError::VariableCountMismatch(target_nvars, p.nvars));
            }
            if p.field != *field {
                return Err(PolyError::ContextMismatch);
            }
        }
        Ok(Substitution {
            field: field.clone(),
            images,
            target_nvars,
            powers: HashMap::new(),
        })
    }

    /// The linear substitution given by a matrix acting on `nvars` variables.
    pub fn linear(g: &Matrix, nvars: usize) -> Result<Self, PolyError> {
        if g.dim() != nvars {
            return Err(PolyError::DimensionMismatch {
                matrix: g.dim(),
                nvars,
            });
        }
        let images = (0..nvars)
            .map(|j| MultiPoly::linear_form(g.field(), &g.column(j)))
            .collect();
        Substitution::new(g.field(), images)
    }

    fn power(&mut self, var: usize, e: u64) -> Result<&MultiPoly, PolyError> {
        if !self.powers.contains_key(&(var, e)) {
            let p = self.images[var].pow(e)?;
            self.powers.insert((var, e), p);
        }
        Ok(&self.powers[&(var, e)])
    }

    pub fn apply(&mut self, f: &MultiPoly) -> Result<MultiPoly, PolyError> {
        if f.nvars != self.images.len() {
            return Err(PolyError::VariableCountMismatch(f.nvars, self.images.len()));
        }
        if f.field != self.field {
            return Err(PolyError::ContextMismatch);
        }
        let field = self.field.clone();
        let nvars = self.target_nvars;
        let mut out = MultiPoly::zero(&field, nvars);
        for (m, &c) in &f.terms {
            let mut prod = MultiPoly::constant(&field, nvars, c);
            for (var, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    let pw = self.power(var, e)?.clone();
                    prod = prod.mul(&pw)?;
                }
            }
            for (m2, c2) in prod.terms {
                accumulate(&field, &mut out.terms, m2, c2);
            }
        }
        Ok(out)
    }
}

/// Determinant of the Jacobian matrix `(d f_i / d x_j)`.
pub fn jacobian_det(fs: &[MultiPoly]) -> Result<MultiPoly, PolyError> {
    let Some(first) = fs.first() else {
        return Err(PolyError::ShapeMismatch { count: 0, nvars: 0 });
    };
    let n = first.nvars;
    if fs.len() != n {
        return Err(PolyError::ShapeMismatch {
            count: fs.len(),
            nvars: n,
        });
    }
    for f in fs {
        first.check(f)?;
    }
    let jac: Vec<Vec<MultiPoly>> = fs
        .iter()
        .map(|f| (0..n).map(|j| f.partial(j)).collect())
        .collect();
    let cols: Vec<usize> = (0..n).collect();
    laplace(&jac, 0, &cols, first.field(), n)
}

fn laplace(m: &[Vec<MultiPoly>], row: usize, cols: &[usize], field: &Field, nvars: usize) -> Result<MultiPoly, PolyError> {
    if cols.is_empty() {
        return Ok(MultiPoly::one(field, nvars));
    }
    let mut acc = MultiPoly::zero(field, nvars);
    for (k, &c) in cols.iter().enumerate() {
        let entry = &m[row][c];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = laplace(m, row + 1, &rest, field, nvars)?;
        let term = entry.mul(&minor)?;
        acc = if k % 2 == 0 { acc.add(&term)? } else { acc.sub(&term)? };
    }
    Ok(acc)
}

/// `P(t) = t^{q^k} + sum_{i<k} c_i t^{q^i}` with polynomial coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearizedPoly {
    q: u64,
    /// `coeffs[i]` multiplies `t^{q^i}`.
    coeffs: Vec<MultiPoly>,
    basis: Vec<MultiPoly>,
}

impl LinearizedPoly {
    /// The identity `P(t) = t`.
    pub fn identity(field: &Field, nvars: usize, q: u64) -> Self {
        LinearizedPoly {
            q,
            coeffs: vec![MultiPoly::one(field, nvars)],
            basis: Vec::new(),
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Dimension `k` of the subspace; the t-degree is `q^k`.
    pub fn dim(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[MultiPoly] {
        &self.coeffs
    }

    pub fn basis(&self) -> &[MultiPoly] {
        &self.basis
    }

    /// Number of roots, `q^k`.
    pub fn t_degree(&self) -> Result<u64, PolyError> {
        self.q
            .checked_pow(self.dim() as u32)
            .ok_or(PolyError::ExponentOverflow)
    }

    /// `sum_i c_i arg^{q^i}`.
    pub fn eval(&self, arg: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.coeffs[0].check(arg)?;
        let mut power = arg.clone();
        let mut acc = self.coeffs[0].mul(&power)?;
        for c in &self.coeffs[1..] {
            power = power.frobenius(self.q)?;
            acc = acc.add(&c.mul(&power)?)?;
        }
        Ok(acc)
    }
}

/// The subspace polynomial `prod_{x in X'} (t - x)` of the `F_q`-span `X'` of
/// `basis`, built one basis vector at a time by
/// `P_{k+1}(t) = P_k(t)^q - P_k(b)^{q-1} P_k(t)`.
pub fn subspace_poly(field: &Field, nvars: usize, basis: &[MultiPoly], q: u64) -> Result<LinearizedPoly, PolyError> {
    if field.subfield_degree_of_order(q).is_none() {
        return Err(PolyError::NotASubfieldOrder(q));
    }
    let mut p = LinearizedPoly::identity(field, nvars, q);
    for (k, b) in basis.iter().enumerate() {
        p.coeffs[0].check(b)?;
        if !b.is_linear_form() {
            return Err(PolyError::NotLinear(k));
        }
        let v = p.eval(b)?;
        if v.is_zero() {
            return Err(PolyError::DependentBasis(k));
        }
        let w = v.pow(q - 1)?;
        let mut next = Vec::with_capacity(p.coeffs.len() + 1);
        for (i, c) in p.coeffs.iter().enumerate() {
            let mut term = w.mul(c)?.neg();
            if i > 0 {
                term = term.add(&p.coeffs[i - 1].frobenius(q)?)?;
            }
            next.push(term);
        }
        next.push(p.coeffs.last().unwrap().frobenius(q)?);
        p.coeffs = next;
        p.basis.push(b.clone());
    }
    Ok(p)
}

/// `P(arg)`.
pub fn eval_linearized(p: &LinearizedPoly, arg: &MultiPoly) -> Result<MultiPoly, PolyError> {
    p.eval(arg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::Field;

    fn f2() -> Field {
        Field::prime(2).unwrap()
    }

    fn gf4() -> Field {
        Field::new(2, 2, &[1, 1, 1]).unwrap()
    }

    fn p(field: &Field, n: usize, s: &str) -> MultiPoly {
        MultiPoly::parse(field, n, s).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let f = f2();
        let s = p(&f, 2, "x1+x2");
        assert_eq!(s.pow(2).unwrap(), p(&f, 2, "x1^2+x2^2"));
        assert_eq!(s.mul(&s).unwrap(), s.pow(2).unwrap());
        let g = gf4();
        let z = g.z().unwrap();
        let x = MultiPoly::var(&g, 1, 0);
        assert_eq!(x.scale(z).add(&x.scale(g.add(z, Fe::ONE))).unwrap(), x);
        assert_eq!(
            s.add(&MultiPoly::var(&f, 3, 0)),
            Err(PolyError::VariableCountMismatch(2, 3))
        );
        let big = MultiPoly::term(&f, Monomial::new(vec![1 << 62]), Fe::ONE);
        assert_eq!(big.mul(&big), Err(PolyError::ExponentOverflow));
    }

    #[test]
    fn pow_matches_repeated_multiplication_in_odd_characteristic() {
        let f = Field::new(3, 2, &[1, 0, 1]).unwrap();
        let a = p(&f, 3, "x1+z*x2+2*x3+1");
        let mut acc = MultiPoly::one(&f, 3);
        for e in 0..10 {
            assert_eq!(a.pow(e).unwrap(), acc);
            acc = acc.mul(&a).unwrap();
        }
    }

    #[test]
    fn action_examples() {
        let f = f2();
        let t12 = Matrix::transvection(&f, 2, 0, 1, Fe::ONE).unwrap();
        assert_eq!(p(&f, 2, "x2^2").act(&t12).unwrap(), p(&f, 2, "x2^2+x1^2"));
        assert_eq!(p(&f, 2, "x1").act(&t12).unwrap(), p(&f, 2, "x1"));
        let q = p(&f, 2, "x1^3*x2+x2^5+1");
        assert_eq!(q.act(&Matrix::identity(&f, 2)).unwrap(), q);
        assert!(matches!(
            q.act(&Matrix::identity(&f, 3)),
            Err(PolyError::DimensionMismatch { matrix: 3, nvars: 2 })
        ));
    }

    #[test]
    fn jacobian_examples() {
        let f = f2();
        let x = p(&f, 2, "x1");
        let y = p(&f, 2, "x2");
        assert_eq!(jacobian_det(&[x.clone(), y.clone()]).unwrap(), MultiPoly::one(&f, 2));
        assert_eq!(jacobian_det(&[x.clone(), p(&f, 2, "x2^2+x1*x2")]).unwrap(), x);
        assert!(jacobian_det(&[p(&f, 2, "x1^2"), y]).unwrap().is_zero());
        assert!(matches!(jacobian_det(&[x]), Err(PolyError::ShapeMismatch { .. })));
    }

    #[test]
    fn subspace_poly_examples() {
        let f = f2();
        let x1 = p(&f, 2, "x1");
        let sp = subspace_poly(&f, 2, std::slice::from_ref(&x1), 2).unwrap();
        assert_eq!(sp.coeffs(), &[x1.clone(), MultiPoly::one(&f, 2)]);
        assert_eq!(sp.eval(&p(&f, 2, "x2")).unwrap(), p(&f, 2, "x2^2+x1*x2"));
        assert!(sp.eval(&x1).unwrap().is_zero());

        let g = gf4();
        let x = p(&g, 2, "x1");
        let sp = subspace_poly(&g, 2, &[x], 4).unwrap();
        assert_eq!(sp.eval(&p(&g, 2, "x2")).unwrap(), p(&g, 2, "x2^4+x1^3*x2"));

        let f3 = Field::prime(2).unwrap();
        let sp = subspace_poly(&f3, 3, &[p(&f3, 3, "x1"), p(&f3, 3, "x2")], 2).unwrap();
        assert_eq!(sp.coeffs()[1], p(&f3, 3, "x1^2+x1*x2+x2^2"));
        assert_eq!(sp.coeffs()[0], p(&f3, 3, "x1^2*x2+x1*x2^2"));
        assert_eq!(sp.t_degree().unwrap(), 4);
    }

    #[test]
    fn subspace_poly_errors() {
        let f = f2();
        assert_eq!(
            subspace_poly(&f, 2, &[p(&f, 2, "x1^2")], 2),
            Err(PolyError::NotLinear(0))
        );
        assert_eq!(
            subspace_poly(&f, 2, &[p(&f, 2, "x1"), p(&f, 2, "x1")], 2),
            Err(PolyError::DependentBasis(1))
        );
        assert_eq!(
            subspace_poly(&f, 2, &[p(&f, 2, "x1")], 4),
            Err(PolyError::NotASubfieldOrder(4))
        );
        // z*x1 is F_2-independent of x1 but F_4-dependent
        let g = gf4();
        assert!(subspace_poly(&g, 1, &[p(&g, 1, "x1"), p(&g, 1, "z*x1")], 2).is_ok());
        assert_eq!(
            subspace_poly(&g, 1, &[p(&g, 1, "x1"), p(&g, 1, "z*x1")], 4),
            Err(PolyError::DependentBasis(1))
        );
    }

    #[test]
    fn text_round_trip() {
        let g = gf4();
        let a = p(&g, 3, "(z+1)*x1^2*x3 + z*x2 + 1 + x1");
        let text = a.to_string();
        assert_eq!(text, "(z+1)*x1^2*x3+x1+z*x2+1");
        assert_eq!(p(&g, 3, &text), a);
        assert_eq!(MultiPoly::zero(&g, 2).to_string(), "0");
        assert!(matches!(
            MultiPoly::parse(&g, 2, "x3"),
            Err(PolyError::VariableOutOfRange { index: 3, nvars: 2 })
        ));
        assert!(MultiPoly::parse(&g, 2, "x1 +").is_err());
        let f3 = Field::prime(3).unwrap();
        assert_eq!(p(&f3, 2, "x1 - x2"), p(&f3, 2, "x1+2*x2"));
    }

    #[test]
    fn homogeneity_and_degree() {
        let f = f2();
        assert!(p(&f, 2, "x1^2+x1*x2").is_homogeneous());
        assert!(!p(&f, 2, "x1^2+x2").is_homogeneous());
        assert_eq!(p(&f, 2, "x1^2+x1*x2").homogeneous_degree(), Some(2));
        assert_eq!(MultiPoly::zero(&f, 2).homogeneous_degree(), None);
    }

    #[test]
    fn monomials_of_degree() {
        let ms = Monomial::all_of_degree(3, 2);
        assert_eq!(ms.len(), 6);
        assert!(ms.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(Monomial::all_of_degree(1, 5).len(), 1);
    }

    #[test]
    fn embed_and_substitute() {
        let f = f2();
        let a = p(&f, 2, "x1^2+x1*x2");
        let e = a.embed(3, &[2, 0]).unwrap();
        assert_eq!(e, p(&f, 3, "x3^2+x1*x3"));
        let s = a.substitute(&[p(&f, 1, "x1"), p(&f, 1, "x1")]).unwrap();
        assert!(s.is_zero());
    }
}
