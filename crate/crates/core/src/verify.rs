//! Exact verification of invariant generators: invariance, the degree-product
//! criterion, independence evidence, and a brute-force graded-dimension
//! oracle compared against the prediction from the generator degrees.

use std::collections::HashMap;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::ffield::Fe;
use crate::invariants::GeneratorSet;
use crate::linalg::Echelon;
use crate::matgroup::GroupClosure;
use crate::poly::{jacobian_det, Monomial, MultiPoly, PolyError, Substitution};

/// Largest number of monomials in one degree handled by the linear algebra.
pub const DEFAULT_MONOMIAL_BUDGET: usize = 5000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("polynomial in {nvars} variables, group of dimension {dim}")]
    DimensionMismatch { nvars: usize, dim: usize },
    #[error("expected {nvars} polynomials, got {count}")]
    ShapeMismatch { count: usize, nvars: usize },
    #[error("generator {0} is zero or not homogeneous")]
    NotHomogeneous(usize),
    #[error("{monomials} monomials of degree {degree} exceed the budget of {budget}")]
    BudgetExceeded { degree: u64, monomials: u128, budget: usize },
}

/// `C(d + n - 1, n - 1)`, the number of monomials of degree `d`.
pub fn monomial_count(nvars: usize, d: u64) -> u128 {
    if nvars == 0 {
        return u128::from(d == 0);
    }
    let k = (nvars - 1) as u128;
    let mut c: u128 = 1;
    for i in 1..=k {
        c = c.saturating_mul(u128::from(d) + i) / i;
    }
    c
}

fn check_budget(nvars: usize, d: u64, budget: usize) -> Result<(), VerifyError> {
    let monomials = monomial_count(nvars, d);
    if monomials > budget as u128 {
        return Err(VerifyError::BudgetExceeded {
            degree: d,
            monomials,
            budget,
        });
    }
    Ok(())
}

/// Whether `f` is fixed by every generator of `group`.
pub fn is_invariant(f: &MultiPoly, group: &GroupClosure) -> Result<bool, VerifyError> {
    Ok(non_invariant_witness(f, group)?.is_none())
}

fn non_invariant_witness(f: &MultiPoly, group: &GroupClosure) -> Result<Option<(usize, MultiPoly)>, VerifyError> {
    if f.nvars() != group.dim() {
        return Err(VerifyError::DimensionMismatch {
            nvars: f.nvars(),
            dim: group.dim(),
        });
    }
    for (k, g) in group.generators().iter().enumerate() {
        let image = f.act(g)?;
        if image != *f {
            return Ok(Some((k, image)));
        }
    }
    Ok(None)
}

/// A basis of the degree-`d` invariants, as coordinate vectors against
/// `monomials`.
#[derive(Debug, Clone)]
pub struct InvariantSpace {
    pub monomials: Vec<Monomial>,
    pub basis: Vec<Vec<Fe>>,
}

impl InvariantSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn polynomial(&self, group: &GroupClosure, v: &[Fe]) -> MultiPoly {
        poly_from_coords(group, &self.monomials, v)
    }
}

fn poly_from_coords(group: &GroupClosure, monomials: &[Monomial], v: &[Fe]) -> MultiPoly {
    let f = group.field();
    let mut out = MultiPoly::zero(f, group.dim());
    for (m, &c) in monomials.iter().zip(v) {
        if !c.is_zero() {
            out = out.add(&MultiPoly::term(f, m.clone(), c)).expect("same ring");
        }
    }
    out
}

/// Solves `(g - 1) f = 0` for every generator `g` on the degree-`d`
/// monomial basis by Gaussian elimination.
pub fn invariant_space(group: &GroupClosure, d: u64, budget: usize) -> Result<InvariantSpace, VerifyError> {
    let n = group.dim();
    check_budget(n, d, budget)?;
    let field = group.field();
    let monomials = Monomial::all_of_degree(n, d);
    let index: HashMap<&Monomial, usize> = monomials.iter().enumerate().map(|(k, m)| (m, k)).collect();
    let mut constraints = Echelon::new(field, monomials.len());
    for g in group.generators() {
        if g.is_identity() {
            continue;
        }
        let mut subst = Substitution::linear(g, n)?;
        let mut rows: Vec<Vec<(usize, Fe)>> = vec![Vec::new(); monomials.len()];
        for (k, m) in monomials.iter().enumerate() {
            let mono = MultiPoly::term(field, m.clone(), Fe::ONE);
            let diff = subst.apply(&mono)?.sub(&mono)?;
            for (mu, c) in diff.terms() {
                rows[index[mu]].push((k, c));
            }
        }
        for row in rows.into_iter().filter(|r| !r.is_empty()) {
            let mut dense = vec![Fe::ZERO; monomials.len()];
            for (k, c) in row {
                dense[k] = c;
            }
            constraints.insert(dense);
        }
    }
    let basis = constraints.null_space();
    Ok(InvariantSpace { monomials, basis })
}

/// Dimension of the degree-`d` invariants.
pub fn invariant_dim(group: &GroupClosure, d: u64) -> Result<usize, VerifyError> {
    Ok(invariant_space(group, d, DEFAULT_MONOMIAL_BUDGET)?.dim())
}

/// Coefficients `0..=depth` of `prod 1/(1 - t^{d_i})`.
pub fn hilbert_from_degrees(degrees: &[u64], depth: u64) -> Vec<u128> {
    let len = depth as usize + 1;
    let mut c = vec![0u128; len];
    c[0] = 1;
    for &d in degrees {
        let d = d as usize;
        if d == 0 {
            continue;
        }
        for k in d..len {
            c[k] = c[k].saturating_add(c[k - d]);
        }
    }
    c
}

fn check_square_homogeneous(fs: &[MultiPoly]) -> Result<usize, VerifyError> {
    let n = fs.first().map_or(0, MultiPoly::nvars);
    if fs.len() != n || n == 0 {
        return Err(VerifyError::ShapeMismatch { count: fs.len(), nvars: n });
    }
    for (i, f) in fs.iter().enumerate() {
        if f.nvars() != n {
            return Err(VerifyError::ShapeMismatch { count: fs.len(), nvars: f.nvars() });
        }
        if f.homogeneous_degree().is_none() {
            return Err(VerifyError::NotHomogeneous(i + 1));
        }
    }
    Ok(n)
}

/// Finds for every variable the least `N <= max_power` with `x_i^N` in the
/// ideal `(f_1, ..., f_n)`, by linear algebra in each degree `N`. Returns
/// `None` if some variable has no such power; never claims dependence.
pub fn hsop_certificate(fs: &[MultiPoly], max_power: u64, budget: usize) -> Result<Option<Vec<u64>>, VerifyError> {
    let n = check_square_homogeneous(fs)?;
    let field = fs[0].field().clone();
    let degrees: Vec<u64> = fs.iter().map(|f| f.homogeneous_degree().expect("checked")).collect();
    let mut powers: Vec<Option<u64>> = vec![None; n];
    for big_n in 1..=max_power {
        check_budget(n, big_n, budget)?;
        let monomials = Monomial::all_of_degree(n, big_n);
        let index: HashMap<&Monomial, usize> = monomials.iter().enumerate().map(|(k, m)| (m, k)).collect();
        let mut ideal = Echelon::new(&field, monomials.len());
        for (f, &d) in fs.iter().zip(&degrees) {
            if d > big_n {
                continue;
            }
            for mu in Monomial::all_of_degree(n, big_n - d) {
                let shifted = f.mul(&MultiPoly::term(&field, mu, Fe::ONE))?;
                let mut v = vec![Fe::ZERO; monomials.len()];
                for (m, c) in shifted.terms() {
                    v[index[m]] = c;
                }
                ideal.insert(v);
            }
        }
        for (i, slot) in powers.iter_mut().enumerate() {
            if slot.is_some() {
                continue;
            }
            let mut e = vec![0; n];
            e[i] = big_n;
            let mut v = vec![Fe::ZERO; monomials.len()];
            v[index[&Monomial::new(e)]] = Fe::ONE;
            if ideal.contains(&v) {
                *slot = Some(big_n);
            }
        }
        if powers.iter().all(Option::is_some) {
            return Ok(Some(powers.into_iter().map(Option::unwrap).collect()));
        }
    }
    Ok(None)
}

/// Evidence that `n` homogeneous polynomials in `n` variables are
/// algebraically independent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type")]
pub enum Independence {
    JacobianNonzero,
    HsopCertified { powers: Vec<u64> },
    None,
}

/// Jacobian first, then the hsop certificate. A Jacobian of zero or an hsop
/// search that runs out of budget gives no evidence either way.
pub fn independence_evidence(fs: &[MultiPoly], max_power: u64, budget: usize) -> Result<Independence, VerifyError> {
    check_square_homogeneous(fs)?;
    if !jacobian_det(fs)?.is_zero() {
        return Ok(Independence::JacobianNonzero);
    }
    match hsop_certificate(fs, max_power, budget) {
        Ok(Some(powers)) => Ok(Independence::HsopCertified { powers }),
        Ok(None) | Err(VerifyError::BudgetExceeded { .. }) => Ok(Independence::None),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Polynomial,
    Inconclusive,
    Refuted,
}

/// A reproducible reason for a `Refuted` verdict. Indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Witness {
    NonInvariant {
        generator: usize,
        group_generator: usize,
        image: String,
    },
    DegreeProduct {
        product: u128,
        order: usize,
    },
    HilbertMismatch {
        d: u64,
        oracle: usize,
        predicted: u128,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HilbertRow {
    pub d: u64,
    pub oracle: usize,
    pub predicted: u128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateReport {
    pub verdict: Verdict,
    pub order: usize,
    pub degrees: Vec<u64>,
    pub degree_product: Option<u128>,
    pub invariance: Vec<bool>,
    pub independence: Independence,
    pub hilbert: Vec<HilbertRow>,
    /// Requested depth; the table may stop earlier at the monomial budget.
    pub depth: u64,
    pub max_power: u64,
    pub witness: Option<Witness>,
}

impl CertificateReport {
    /// Whether the Hilbert table is complete up to the requested depth.
    pub fn hilbert_complete(&self) -> bool {
        self.hilbert.len() as u64 == self.depth + 1
    }

    pub fn hilbert_agrees(&self) -> bool {
        self.hilbert.iter().all(|r| r.oracle as u128 == r.predicted)
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "verdict": self.verdict,
            "order": self.order,
            "degrees": self.degrees,
            "degree_product": self.degree_product,
            "invariance": self.invariance,
            "independence": self.independence,
            "hilbert": self.hilbert,
            "depth": self.depth,
            "max_power": self.max_power,
        });
        if let Some(w) = &self.witness {
            v["witness"] = json!(w);
        }
        v
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("verdict: {:?}\n", self.verdict);
        out += &format!(
            "order: {}\ndegrees: {:?}\ndegree product: {}\n",
            self.order,
            self.degrees,
            self.degree_product.map_or("overflow".to_string(), |p| p.to_string())
        );
        out += &format!("invariance: {:?}\n", self.invariance);
        out += &match &self.independence {
            Independence::JacobianNonzero => "independence: Jacobian nonzero\n".to_string(),
            Independence::HsopCertified { powers } => format!("independence: hsop certified, powers {powers:?}\n"),
            Independence::None => format!("independence: none found (hsop max power {})\n", self.max_power),
        };
        out += "hilbert (d: oracle / predicted):";
        for r in &self.hilbert {
            out += &format!(" {}:{}/{}", r.d, r.oracle, r.predicted);
        }
        out += "\n";
        if let Some(w) = &self.witness {
            out += &format!("witness: {}\n", serde_json::to_string(w).expect("serializable"));
        }
        out
    }
}

/// Budgets for [`polynomiality_certificate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertifyOptions {
    /// Hilbert depth; defaults to `max(2 * max degree, 12)`.
    pub depth: Option<u64>,
    /// hsop search bound; defaults to `|G| + max degree`.
    pub max_power: Option<u64>,
    pub budget: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            depth: None,
            max_power: None,
            budget: DEFAULT_MONOMIAL_BUDGET,
        }
    }
}

/// Invariance, degree product and independence decide the verdict; the
/// Hilbert table is compared as an independent cross-check and any mismatch
/// refutes.
pub fn polynomiality_certificate(
    group: &GroupClosure,
    gens: &GeneratorSet,
    opts: CertifyOptions,
) -> Result<CertificateReport, VerifyError> {
    let fs = gens.polynomials();
    let n = check_square_homogeneous(&fs)?;
    if n != group.dim() {
        return Err(VerifyError::DimensionMismatch { nvars: n, dim: group.dim() });
    }
    let degrees: Vec<u64> = fs.iter().map(|f| f.homogeneous_degree().expect("checked")).collect();
    let max_deg = degrees.iter().copied().max().unwrap_or(0);
    let depth = opts.depth.unwrap_or((2 * max_deg).max(12));
    let max_power = opts.max_power.unwrap_or(group.order() as u64 + max_deg);
    let order = group.order();

    let mut witness = None;
    let mut invariance = Vec::with_capacity(n);
    for (i, f) in fs.iter().enumerate() {
        let w = non_invariant_witness(f, group)?;
        if let (Some((k, image)), None) = (&w, &witness) {
            witness = Some(Witness::NonInvariant {
                generator: i + 1,
                group_generator: k + 1,
                image: image.to_string(),
            });
        }
        invariance.push(w.is_none());
    }
    let degree_product = degrees.iter().try_fold(1u128, |acc, &d| acc.checked_mul(u128::from(d)));
    if witness.is_none() && degree_product != Some(order as u128) {
        witness = Some(Witness::DegreeProduct {
            product: degree_product.unwrap_or(u128::MAX),
            order,
        });
    }

    let predicted = hilbert_from_degrees(&degrees, depth);
    let mut hilbert = Vec::new();
    for d in 0..=depth {
        let oracle = match invariant_space(group, d, opts.budget) {
            Ok(space) => space.dim(),
            Err(VerifyError::BudgetExceeded { .. }) => break,
            Err(e) => return Err(e),
        };
        let p = predicted[d as usize];
        if witness.is_none() && oracle as u128 != p {
            witness = Some(Witness::HilbertMismatch { d, oracle, predicted: p });
        }
        hilbert.push(HilbertRow { d, oracle, predicted: p });
    }

    let independence = if witness.is_none() {
        independence_evidence(&fs, max_power, opts.budget)?
    } else {
        Independence::None
    };
    let verdict = if witness.is_some() {
        Verdict::Refuted
    } else if independence != Independence::None {
        Verdict::Polynomial
    } else {
        Verdict::Inconclusive
    };
    Ok(CertificateReport {
        verdict,
        order,
        degrees,
        degree_product,
        invariance,
        independence,
        hilbert,
        depth,
        max_power,
        witness,
    })
}
