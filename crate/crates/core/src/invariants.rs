//! Explicit homogeneous invariant generators: Dickson and determinant-level
//! generators, orbit Chern classes, a degree-by-degree search, and the
//! polynomial gluing pipeline for sparsity groups.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::ffield::{Fe, Field, FieldError};
use crate::linalg::Echelon;
use crate::matgroup::{orbit, GroupClosure, MatError, Matrix};
use crate::poly::{subspace_poly, LinearizedPoly, MultiPoly, PolyError};
use crate::sparsity::{BlockType, StructureReport};
use crate::verify::{polynomiality_certificate, CertifyOptions, Verdict, VerifyError, DEFAULT_MONOMIAL_BUDGET};

#[derive(Debug, Error)]
pub enum InvariantError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("{m} does not divide q - 1 = {}", q - 1)]
    NotADivisor { m: u64, q: u64 },
    #[error("group order {order} is not a power of {p}")]
    NotAPGroup { order: usize, p: u32 },
    #[error("the span of the first {0} basis vectors is not stable")]
    FlagNotStable(usize),
    #[error("orbit sizes {orbit_sizes:?} multiply to {product}, not the group order {order}")]
    OrbitProductMismatch {
        orbit_sizes: Vec<usize>,
        product: u128,
        order: usize,
    },
    #[error("generator variables overlap or leave their declared index sets")]
    VariableOverlap,
    #[error("the m-th power of the Euler class is not invariant (m = {m})")]
    CharacterCheckFailed { m: u64 },
    #[error("{found} generators up to degree {degree}, more than the dimension {needed}")]
    NotPolynomialWithinBudget { found: usize, needed: usize, degree: u64 },
    #[error("generator search for block {0} was inconclusive")]
    IncompleteBlock(usize),
    #[error("structure assertion ({0}) failed")]
    AssertionFailed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Provenance {
    Dickson,
    EulerPower,
    OrbitChern,
    Glued,
    Searched,
    Variable,
}

impl std::str::FromStr for Provenance {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "Dickson" => Provenance::Dickson,
            "EulerPower" => Provenance::EulerPower,
            "OrbitChern" => Provenance::OrbitChern,
            "Glued" => Provenance::Glued,
            "Searched" => Provenance::Searched,
            "Variable" => Provenance::Variable,
            other => return Err(format!("unknown provenance '{other}'")),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub poly: MultiPoly,
    pub degree: u64,
    pub provenance: Provenance,
}

/// Homogeneous generators, sorted by degree (stable).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    field: Field,
    nvars: usize,
    generators: Vec<Generator>,
    complete: bool,
}

impl GeneratorSet {
    pub fn new(field: &Field, nvars: usize, polys: Vec<(MultiPoly, Provenance)>) -> Self {
        let mut generators: Vec<Generator> = polys
            .into_iter()
            .map(|(poly, provenance)| Generator {
                degree: poly.total_degree().unwrap_or(0),
                poly,
                provenance,
            })
            .collect();
        generators.sort_by_key(|g| g.degree);
        GeneratorSet {
            field: field.clone(),
            nvars,
            generators,
            complete: true,
        }
    }

    /// Marks a partial result, such as an inconclusive search.
    pub fn with_complete(mut self, complete: bool) -> Self {
        self.complete = complete;
        self
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn polynomials(&self) -> Vec<MultiPoly> {
        self.generators.iter().map(|g| g.poly.clone()).collect()
    }

    pub fn degrees(&self) -> Vec<u64> {
        self.generators.iter().map(|g| g.degree).collect()
    }

    pub fn degree_product(&self) -> Option<u128> {
        self.generators
            .iter()
            .try_fold(1u128, |acc, g| acc.checked_mul(u128::from(g.degree)))
    }

    fn pairs(&self) -> Vec<(MultiPoly, Provenance)> {
        self.generators.iter().map(|g| (g.poly.clone(), g.provenance)).collect()
    }

    /// Applies `f -> c . f` to every generator. If the set is invariant
    /// under `c^{-1} G c`, the result is invariant under `G`.
    pub fn pullback(&self, c: &Matrix) -> Result<GeneratorSet, InvariantError> {
        let polys = self
            .generators
            .iter()
            .map(|g| Ok((g.poly.act(c)?, g.provenance)))
            .collect::<Result<Vec<_>, PolyError>>()?;
        Ok(GeneratorSet::new(&self.field, self.nvars, polys).with_complete(self.complete))
    }

    /// Reads the output of [`GeneratorSet::to_json`], or an object holding it
    /// under `"generators"`.
    pub fn from_json(field: &Field, nvars: usize, value: &Value) -> Result<GeneratorSet, InvariantError> {
        let list = value.get("generators").unwrap_or(value);
        let bad = |what: &str| PolyError::Syntax(crate::TextError {
            column: 1,
            expected: what.to_string(),
        });
        let items = list.as_array().ok_or_else(|| bad("a JSON list of generators"))?;
        let mut polys = Vec::with_capacity(items.len());
        for item in items {
            let text = item
                .get("polynomial")
                .and_then(Value::as_str)
                .ok_or_else(|| bad("a \"polynomial\" string"))?;
            let provenance = match item.get("provenance").and_then(Value::as_str) {
                Some(s) => s.parse().map_err(|e: String| bad(&e))?,
                None => Provenance::Searched,
            };
            polys.push((MultiPoly::parse(field, nvars, text)?, provenance));
        }
        Ok(GeneratorSet::new(field, nvars, polys))
    }

    /// A list of `{degree, provenance, polynomial}` objects.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.generators
                .iter()
                .map(|g| json!({"degree": g.degree, "provenance": g.provenance, "polynomial": g.poly.to_string()}))
                .collect(),
        )
    }
}

fn check_vars(nvars: usize, vars: &[usize]) -> Result<(), InvariantError> {
    if let Some(&v) = vars.iter().find(|&&v| v >= nvars) {
        return Err(PolyError::VariableOutOfRange { index: v + 1, nvars }.into());
    }
    if vars.iter().collect::<BTreeSet<_>>().len() != vars.len() {
        return Err(InvariantError::VariableOverlap);
    }
    Ok(())
}

fn dickson_poly(field: &Field, nvars: usize, q: u64, vars: &[usize]) -> Result<LinearizedPoly, InvariantError> {
    check_vars(nvars, vars)?;
    let basis: Vec<MultiPoly> = vars.iter().map(|&v| MultiPoly::var(field, nvars, v)).collect();
    Ok(subspace_poly(field, nvars, &basis, q)?)
}

/// The coefficients `c_0, ..., c_{n-1}` of the subspace polynomial of the
/// full `F_q`-span of `vars`, of degrees `q^n - q^i`.
pub fn dickson_generators(field: &Field, nvars: usize, q: u64, vars: &[usize]) -> Result<GeneratorSet, InvariantError> {
    let p = dickson_poly(field, nvars, q, vars)?;
    let polys = p.coeffs()[..vars.len()]
        .iter()
        .map(|c| (c.clone(), Provenance::Dickson))
        .collect();
    Ok(GeneratorSet::new(field, nvars, polys))
}

/// The product of one linear form per line of the `F_q`-span of `vars`,
/// with first nonzero coordinate `1`.
pub fn euler_class(field: &Field, nvars: usize, q: u64, vars: &[usize]) -> Result<MultiPoly, InvariantError> {
    check_vars(nvars, vars)?;
    let d = field.subfield_degree_of_order(q).ok_or(PolyError::NotASubfieldOrder(q))?;
    let scalars: Vec<Fe> = field.subfield(d)?.elements().iter().collect();
    let n = vars.len();
    let mut e = MultiPoly::one(field, nvars);
    for lead in 0..n {
        let tail = n - lead - 1;
        let count = (scalars.len() as u64).checked_pow(tail as u32).ok_or(PolyError::ExponentOverflow)?;
        for code in 0..count {
            let mut coeffs = vec![Fe::ZERO; nvars];
            coeffs[vars[lead]] = Fe::ONE;
            let mut c = code;
            for k in (lead + 1..n).rev() {
                coeffs[vars[k]] = scalars[(c % scalars.len() as u64) as usize];
                c /= scalars.len() as u64;
            }
            e = e.mul(&MultiPoly::linear_form(field, &coeffs))?;
        }
    }
    Ok(e)
}

/// Generators for `{M in GL(n, F_q) : det M in K}` with `|K| = m`: the
/// Dickson coefficients `c_1, ..., c_{n-1}` and `e^m` for the Euler class
/// `e`. Invariance of `e^m` is checked against the group's generators.
pub fn det_level_generators(
    field: &Field,
    nvars: usize,
    q: u64,
    m: u64,
    vars: &[usize],
) -> Result<GeneratorSet, InvariantError> {
    let d = field.subfield_degree_of_order(q).ok_or(PolyError::NotASubfieldOrder(q))?;
    if m == 0 || !(q - 1).is_multiple_of(m) {
        return Err(InvariantError::NotADivisor { m, q });
    }
    let p = dickson_poly(field, nvars, q, vars)?;
    let em = euler_class(field, nvars, q, vars)?.pow(m)?;

    let sub = field.subfield(d)?;
    let basis = field.additive_span(sub.elements().as_slice(), &field.prime_subfield()).basis;
    let mut checks = Vec::new();
    for &i in vars {
        for &j in vars {
            if i != j {
                for &a in &basis {
                    checks.push(Matrix::transvection(field, nvars, i, j, a)?);
                }
            }
        }
    }
    if m > 1 {
        let kappa = field.element_of_order(m).expect("m divides q - 1");
        checks.push(Matrix::diagonal(field, nvars, vars[0], kappa)?);
    }
    for g in &checks {
        if em.act(g)? != em {
            return Err(InvariantError::CharacterCheckFailed { m });
        }
    }

    let mut polys: Vec<(MultiPoly, Provenance)> = p.coeffs()[1..vars.len()]
        .iter()
        .map(|c| (c.clone(), Provenance::Dickson))
        .collect();
    polys.push((em, Provenance::EulerPower));
    Ok(GeneratorSet::new(field, nvars, polys))
}

/// Products over the orbits of the basis vectors, in the order
/// `basis_order`, after checking that `G` is a `p`-group, that the flag
/// `span(e_{o_1}, ..., e_{o_k})` is stable, and that the orbit sizes
/// multiply to `|G|`.
pub fn orbit_chern_generators(group: &GroupClosure, basis_order: &[usize]) -> Result<GeneratorSet, InvariantError> {
    let n = group.dim();
    let field = group.field();
    check_vars(n, basis_order)?;
    if basis_order.len() != n {
        return Err(InvariantError::VariableOverlap);
    }
    let p = field.characteristic() as usize;
    let mut o = group.order();
    while o.is_multiple_of(p) {
        o /= p;
    }
    if o != 1 {
        return Err(InvariantError::NotAPGroup {
            order: group.order(),
            p: field.characteristic(),
        });
    }
    for k in 1..=n {
        let prefix = &basis_order[..k];
        let stable = group.generators().iter().all(|g| {
            prefix
                .iter()
                .all(|&col| (0..n).all(|row| prefix.contains(&row) || g.get(row, col).is_zero()))
        });
        if !stable {
            return Err(InvariantError::FlagNotStable(k));
        }
    }
    let orbits = basis_order
        .iter()
        .map(|&i| {
            let mut e = vec![Fe::ZERO; n];
            e[i] = Fe::ONE;
            orbit(group, &e)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let orbit_sizes: Vec<usize> = orbits.iter().map(Vec::len).collect();
    let product = orbit_sizes.iter().map(|&s| s as u128).product::<u128>();
    if product != group.order() as u128 {
        return Err(InvariantError::OrbitProductMismatch {
            orbit_sizes,
            product,
            order: group.order(),
        });
    }
    let mut polys = Vec::with_capacity(n);
    for orb in orbits {
        let mut c = MultiPoly::one(field, n);
        for v in orb {
            c = c.mul(&MultiPoly::linear_form(field, &v))?;
        }
        polys.push((c, Provenance::OrbitChern));
    }
    Ok(GeneratorSet::new(field, n, polys))
}

/// The data of one gluing step: `X' = F_q-span(basis)` inside the
/// `x_vars` part, `P(t) = prod_{x in X'} (t - x)`, and `f_j = P(y_j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluingSpec {
    pub x_vars: Vec<usize>,
    pub y_vars: Vec<usize>,
    pub q: u64,
    pub basis: Vec<MultiPoly>,
    pub p: LinearizedPoly,
    pub f: Vec<MultiPoly>,
}

impl GluingSpec {
    pub fn new(
        field: &Field,
        nvars: usize,
        x_vars: &[usize],
        y_vars: &[usize],
        q: u64,
        basis: Vec<MultiPoly>,
    ) -> Result<GluingSpec, InvariantError> {
        let mut all = x_vars.to_vec();
        all.extend_from_slice(y_vars);
        check_vars(nvars, &all)?;
        if basis.iter().any(|b| b.support().iter().any(|v| !x_vars.contains(v))) {
            return Err(InvariantError::VariableOverlap);
        }
        let p = subspace_poly(field, nvars, &basis, q)?;
        let f = y_vars
            .iter()
            .map(|&y| p.eval(&MultiPoly::var(field, nvars, y)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GluingSpec {
            x_vars: x_vars.to_vec(),
            y_vars: y_vars.to_vec(),
            q,
            basis,
            p,
            f,
        })
    }

    /// `|X'| = q^{dim X'}`.
    pub fn subspace_size(&self) -> Result<u64, PolyError> {
        self.p.t_degree()
    }
}

/// `inv_x` unchanged together with `g(f_1, ..., f_m)` for each `g` in `inv_y`.
pub fn glue(inv_x: &GeneratorSet, inv_y: &GeneratorSet, spec: &GluingSpec) -> Result<GeneratorSet, InvariantError> {
    let field = inv_x.field.clone();
    let nvars = inv_x.nvars;
    if inv_y.nvars != nvars || inv_y.field != field {
        return Err(PolyError::VariableCountMismatch(nvars, inv_y.nvars).into());
    }
    let inside = |set: &GeneratorSet, vars: &[usize]| {
        set.generators
            .iter()
            .all(|g| g.poly.support().iter().all(|v| vars.contains(v)))
    };
    if spec.x_vars.iter().any(|v| spec.y_vars.contains(v))
        || !inside(inv_x, &spec.x_vars)
        || !inside(inv_y, &spec.y_vars)
    {
        return Err(InvariantError::VariableOverlap);
    }
    let mut out = inv_x.pairs();
    if spec.basis.is_empty() {
        out.extend(inv_y.pairs());
    } else {
        let images: Vec<MultiPoly> = (0..nvars)
            .map(|v| match spec.y_vars.iter().position(|&y| y == v) {
                Some(j) => spec.f[j].clone(),
                None => MultiPoly::var(&field, nvars, v),
            })
            .collect();
        let mut subst = crate::poly::Substitution::new(&field, images)?;
        for g in &inv_y.generators {
            out.push((subst.apply(&g.poly)?, Provenance::Glued));
        }
    }
    Ok(GeneratorSet::new(&field, nvars, out).with_complete(inv_x.complete && inv_y.complete))
}

fn coords(poly: &MultiPoly, index: &HashMap<crate::poly::Monomial, usize>, len: usize) -> Vec<Fe> {
    let mut v = vec![Fe::ZERO; len];
    for (m, c) in poly.terms() {
        v[index[m]] = c;
    }
    v
}

/// All products of `gens` (with repetition) of total degree `d`.
fn products_of_degree(gens: &[MultiPoly], degrees: &[u64], d: u64, nvars: usize, field: &Field) -> Result<Vec<MultiPoly>, PolyError> {
    fn rec(
        k: usize,
        rem: u64,
        acc: MultiPoly,
        gens: &[MultiPoly],
        degrees: &[u64],
        out: &mut Vec<MultiPoly>,
    ) -> Result<(), PolyError> {
        if rem == 0 {
            out.push(acc);
            return Ok(());
        }
        if k == gens.len() {
            return Ok(());
        }
        let mut power = acc;
        let mut used = 0;
        loop {
            rec(k + 1, rem - used, power.clone(), gens, degrees, out)?;
            if degrees[k] == 0 || used + degrees[k] > rem {
                break;
            }
            used += degrees[k];
            power = power.mul(&gens[k])?;
        }
        Ok(())
    }
    let mut out = Vec::new();
    rec(0, d, MultiPoly::one(field, nvars), gens, degrees, &mut out)?;
    Ok(out)
}

/// Minimal homogeneous generators found degree by degree up to
/// `max_degree`. Stops as soon as `n` generators with degree product `|G|`
/// are certified; otherwise returns the partial set marked incomplete.
pub fn search_generators(group: &GroupClosure, max_degree: u64) -> Result<GeneratorSet, InvariantError> {
    let field = group.field().clone();
    let n = group.dim();
    let mut chosen: Vec<MultiPoly> = Vec::new();
    let mut degrees: Vec<u64> = Vec::new();
    for d in 1..=max_degree {
        let space = crate::verify::invariant_space(group, d, DEFAULT_MONOMIAL_BUDGET)?;
        if space.dim() == 0 {
            continue;
        }
        let index: HashMap<crate::poly::Monomial, usize> =
            space.monomials.iter().enumerate().map(|(k, m)| (m.clone(), k)).collect();
        let len = space.monomials.len();
        let mut span = Echelon::new(&field, len);
        for prod in products_of_degree(&chosen, &degrees, d, n, &field)? {
            span.insert(coords(&prod, &index, len));
        }
        for v in &space.basis {
            if span.insert(v.clone()) {
                chosen.push(space.polynomial(group, v));
                degrees.push(d);
            }
        }
        if chosen.len() > n {
            return Err(InvariantError::NotPolynomialWithinBudget {
                found: chosen.len(),
                needed: n,
                degree: d,
            });
        }
        let product: u128 = degrees.iter().map(|&x| u128::from(x)).product();
        if chosen.len() == n && product == group.order() as u128 {
            let set = GeneratorSet::new(&field, n, chosen.iter().map(|p| (p.clone(), Provenance::Searched)).collect());
            let opts = CertifyOptions {
                depth: Some(d),
                ..CertifyOptions::default()
            };
            if polynomiality_certificate(group, &set, opts)?.verdict == Verdict::Polynomial {
                return Ok(set);
            }
        }
    }
    let set = GeneratorSet::new(&field, n, chosen.into_iter().map(|p| (p, Provenance::Searched)).collect());
    Ok(set.with_complete(false))
}

/// Output of [`sparsity_invariants`], in the rescaled natural basis of the
/// structure report.
#[derive(Debug, Clone)]
pub struct SparsityInvariants {
    pub generators: GeneratorSet,
    pub block_generators: Vec<GeneratorSet>,
    pub gluings: Vec<GluingSpec>,
    /// The report's change of basis `C`; see [`SparsityInvariants::pullback`].
    pub change_of_basis: Matrix,
}

impl SparsityInvariants {
    /// The generators in the original basis of the pattern.
    pub fn pullback(&self) -> Result<GeneratorSet, InvariantError> {
        self.generators.pullback(&self.change_of_basis)
    }
}

fn block_generators(
    report: &StructureReport,
    r: usize,
    vars: &[usize],
    search_degree: Option<u64>,
) -> Result<GeneratorSet, InvariantError> {
    let field = &report.field;
    let n = report.n;
    Ok(match report.block_types[r] {
        BlockType::Trivial => GeneratorSet::new(field, n, vec![(MultiPoly::var(field, n, vars[0]), Provenance::Variable)]),
        BlockType::OneDim { m } => GeneratorSet::new(
            field,
            n,
            vec![(MultiPoly::var(field, n, vars[0]).pow(m)?, Provenance::EulerPower)],
        ),
        BlockType::DetLevel { q, m } if m == q - 1 => dickson_generators(field, n, q, vars)?,
        BlockType::DetLevel { q, m } => det_level_generators(field, n, q, m, vars)?,
        BlockType::TwoByTwo | BlockType::Unclassified => {
            let gx = &report.block_groups[r];
            let found = search_generators(gx, search_degree.unwrap_or(gx.order() as u64 + 1))?;
            if !found.is_complete() {
                return Err(InvariantError::IncompleteBlock(r + 1));
            }
            let polys = found
                .generators
                .iter()
                .map(|g| Ok((g.poly.embed(n, vars)?, g.provenance)))
                .collect::<Result<Vec<_>, PolyError>>()?;
            GeneratorSet::new(field, n, polys)
        }
    })
}

/// Generators of the invariants of the rescaled sparsity group, built by
/// gluing block `s` onto blocks `1..s` with `F_q = k_ss` and
/// `X' = sum_{r<s} sum_{i in J_r} k_rs x_i`.
pub fn sparsity_invariants(report: &StructureReport) -> Result<SparsityInvariants, InvariantError> {
    sparsity_invariants_with(report, None)
}

/// [`sparsity_invariants`] with an explicit degree bound for the generator
/// search on exceptional blocks (default `|G_X| + 1`).
pub fn sparsity_invariants_with(
    report: &StructureReport,
    search_degree: Option<u64>,
) -> Result<SparsityInvariants, InvariantError> {
    if let Some(tag) = report.first_failure() {
        return Err(InvariantError::AssertionFailed(tag));
    }
    let field = &report.field;
    let n = report.n;
    let ranges = report.blocks.ranges();
    let mut blocks = Vec::with_capacity(ranges.len());
    let mut gluings = Vec::new();
    let mut current: Option<GeneratorSet> = None;
    let mut x_vars: Vec<usize> = Vec::new();
    for (s, range) in ranges.iter().enumerate() {
        let y_vars: Vec<usize> = range.clone().collect();
        let inv_y = block_generators(report, s, &y_vars, search_degree)?;
        blocks.push(inv_y.clone());
        current = Some(match current {
            None => inv_y,
            Some(inv_x) => {
                let kss = &report.k[s][s];
                let q = kss.len() as u64;
                let sub = field.subfield(field.subfield_degree_of_order(q).ok_or(PolyError::NotASubfieldOrder(q))?)?;
                let mut basis = Vec::new();
                for (r, rr) in ranges[..s].iter().enumerate() {
                    let span = field.additive_span(report.k[r][s].as_slice(), &sub);
                    for i in rr.clone() {
                        for &a in &span.basis {
                            basis.push(MultiPoly::var(field, n, i).scale(a));
                        }
                    }
                }
                let spec = GluingSpec::new(field, n, &x_vars, &y_vars, q, basis)?;
                let glued = glue(&inv_x, &inv_y, &spec)?;
                gluings.push(spec);
                glued
            }
        });
        x_vars.extend(y_vars);
    }
    Ok(SparsityInvariants {
        generators: current.unwrap_or_else(|| GeneratorSet::new(field, n, Vec::new())),
        block_generators: blocks,
        gluings,
        change_of_basis: report.change_of_basis.clone(),
    })
}
