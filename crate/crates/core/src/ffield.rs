//! Exact arithmetic in a fixed finite field `GF(p^K)`.
//!
//! An element is the coefficient vector of a polynomial in `z` of degree
//! below `K`, reduced modulo the field's monic irreducible modulus. The
//! vector is stored packed as the base-`p` integer `c_0 + c_1 p + ... `, so
//! that elements are `Copy`, hashable and totally ordered. Element values are
//! only meaningful together with the [`Field`] that produced them.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::text::{Cursor, TextError};

/// Largest supported field size `p^K`.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;
/// Fields up to this size get log/antilog tables.
const TABLE_LIMIT: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is not irreducible over F_{p}: {modulus}")]
    NotIrreducible { p: u32, modulus: String },
    #[error("modulus has degree {found}, expected a monic polynomial of degree {expected}")]
    DegreeMismatch { expected: u32, found: usize },
    #[error("field size {p}^{degree} exceeds 2^20")]
    TooLarge { p: u64, degree: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different fields")]
    ContextMismatch,
    #[error("{d} does not divide the extension degree {degree}")]
    NotADivisor { d: u32, degree: u32 },
    #[error("{0} is not the order of a subfield")]
    NotASubfieldOrder(u64),
    #[error("empty scalar set")]
    EmptySet,
    #[error("column {column}: element not in field: {text}")]
    ElementNotInField { column: usize, text: String },
    #[error(transparent)]
    Syntax(#[from] TextError),
}

/// A field element, meaningful relative to its [`Field`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fe(u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    /// The packed coefficient vector, `sum c_i p^i`.
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Tables {
    log: Vec<u32>,
    exp: Vec<u32>,
}

struct Inner {
    p: u32,
    degree: u32,
    /// Low-to-high coefficients, monic, length `degree + 1`.
    modulus: Vec<u32>,
    size: u32,
    tables: Option<Tables>,
}

/// The ambient field `GF(p^K)`. Cheap to clone; immutable.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.degree)?;
        if self.0.degree > 1 {
            write!(f, " mod {}", format_zpoly(&self.0.modulus))?;
        }
        Ok(())
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn format_zpoly(coeffs: &[u32]) -> String {
    let mut parts = Vec::new();
    for (k, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let term = match (k, c) {
            (0, c) => c.to_string(),
            (1, 1) => "z".to_string(),
            (1, c) => format!("{c}*z"),
            (k, 1) => format!("z^{k}"),
            (k, c) => format!("{c}*z^{k}"),
        };
        parts.push(term);
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

/// Remainder of `a` modulo the monic polynomial `m` over F_p (low-to-high).
fn zpoly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = a.iter().map(|&c| u64::from(c)).collect();
    let dm = m.len() - 1;
    let p64 = u64::from(p);
    while r.len() > dm {
        let lead = r.pop().unwrap() % p64;
        if lead != 0 {
            let base = r.len() - dm;
            for (k, &mc) in m[..dm].iter().enumerate() {
                let sub = lead * u64::from(mc) % p64;
                r[base + k] = (r[base + k] + p64 - sub) % p64;
            }
        }
    }
    r.into_iter().map(|c| (c % p64) as u32).collect()
}

/// Irreducibility of a monic polynomial by trial division with every monic
/// polynomial of degree `1..=deg/2`.
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let deg = modulus.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                divisor.push((c % p as u64) as u32);
                c /= p as u64;
            }
            divisor.push(1);
            if zpoly_rem(modulus, &divisor, p).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// Builds `GF(p^degree)` with the given modulus, low-to-high coefficients.
    ///
    /// The modulus may be given with its leading `1` (length `degree + 1`) or
    /// without it (length `degree`). For `degree == 1` the modulus is
    /// irrelevant and may be empty.
    pub fn new(p: u64, degree: u32, modulus: &[u32]) -> Result<Field, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if degree == 0 {
            return Err(FieldError::DegreeMismatch {
                expected: 1,
                found: 0,
            });
        }
        let size = p
            .checked_pow(degree)
            .filter(|&s| s <= MAX_FIELD_SIZE)
            .ok_or(FieldError::TooLarge { p, degree })?;
        let p = p as u32;
        let d = degree as usize;
        let modulus: Vec<u32> = if degree == 1 && modulus.len() <= 2 {
            vec![0, 1]
        } else if modulus.len() == d + 1 && modulus[d] == 1 {
            modulus.to_vec()
        } else if modulus.len() == d {
            let mut m = modulus.to_vec();
            m.push(1);
            m
        } else {
            return Err(FieldError::DegreeMismatch {
                expected: degree,
                found: modulus.len().saturating_sub(1),
            });
        };
        if modulus.iter().any(|&c| c >= p) {
            return Err(FieldError::NotIrreducible {
                p,
                modulus: format!("{modulus:?}"),
            });
        }
        if degree > 1 && !is_irreducible(&modulus, p) {
            return Err(FieldError::NotIrreducible {
                p,
                modulus: format_zpoly(&modulus),
            });
        }
        let mut inner = Inner {
            p,
            degree,
            modulus,
            size: size as u32,
            tables: None,
        };
        if degree > 1 && size <= TABLE_LIMIT {
            inner.tables = Some(build_tables(&inner));
        }
        Ok(Field(Arc::new(inner)))
    }

    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Field, FieldError> {
        Field::new(p, 1, &[])
    }

    /// Parses `GF(p^K) mod <poly>` (or `GF(p)` / `GF(p^1)`).
    pub fn parse(text: &str) -> Result<Field, FieldError> {
        let mut cur = Cursor::new(text);
        let field = Field::parse_cursor(&mut cur)?;
        cur.finish()?;
        Ok(field)
    }

    pub(crate) fn parse_cursor(cur: &mut Cursor<'_>) -> Result<Field, FieldError> {
        if !cur.eat_word("GF") {
            return Err(cur.error("'GF'").into());
        }
        cur.expect(b'(')?;
        let p = cur.uint()?;
        let degree = if cur.eat(b'^') { cur.uint()? } else { 1 };
        cur.expect(b')')?;
        let degree = u32::try_from(degree).map_err(|_| FieldError::TooLarge { p, degree: u32::MAX })?;
        if cur.eat_word("mod") {
            let coeffs = parse_zpoly(cur, p)?;
            Field::new(p, degree, &coeffs)
        } else if degree == 1 {
            Field::prime(p)
        } else {
            Err(cur.error("'mod <polynomial>' for an extension field").into())
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    /// Extension degree `K` over the prime field.
    pub fn degree(&self) -> u32 {
        self.0.degree
    }

    /// Number of elements `p^K`.
    pub fn size(&self) -> u32 {
        self.0.size
    }

    /// Low-to-high monic modulus.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }

    pub fn one(&self) -> Fe {
        Fe::ONE
    }

    /// The class of `z`, when `K > 1`.
    pub fn z(&self) -> Option<Fe> {
        (self.0.degree > 1).then_some(Fe(self.0.p))
    }

    /// All elements in canonical (index) order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.0.size).map(Fe)
    }

    pub fn element(&self, index: u32) -> Option<Fe> {
        (index < self.0.size).then_some(Fe(index))
    }

    /// The image of an integer under `Z -> F_p -> F`.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(i64::from(self.0.p)) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Fe, FieldError> {
        let p = self.0.p;
        if coeffs.iter().any(|&c| c >= p) {
            return Err(FieldError::ElementNotInField {
                column: 0,
                text: format!("{coeffs:?}"),
            });
        }
        let reduced = if coeffs.len() > self.0.degree as usize {
            zpoly_rem(coeffs, &self.0.modulus, p)
        } else {
            coeffs.to_vec()
        };
        Ok(self.pack(&reduced))
    }

    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        let p = self.0.p;
        let mut x = a.0;
        (0..self.0.degree)
            .map(|_| {
                let c = x % p;
                x /= p;
                c
            })
            .collect()
    }

    fn pack(&self, coeffs: &[u32]) -> Fe {
        let p = self.0.p;
        Fe(coeffs.iter().rev().fold(0, |acc, &c| acc * p + c))
    }

    pub fn in_prime_field(&self, a: Fe) -> bool {
        a.0 < self.0.p
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let p = self.0.p;
        if p == 2 {
            return Fe(a.0 ^ b.0);
        }
        if self.0.degree == 1 {
            return Fe((a.0 + b.0) % p);
        }
        let (mut x, mut y) = (a.0, b.0);
        let (mut r, mut place) = (0, 1);
        while x > 0 || y > 0 {
            r += (x % p + y % p) % p * place;
            x /= p;
            y /= p;
            place *= p;
        }
        Fe(r)
    }

    pub fn neg(&self, a: Fe) -> Fe {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        let mut x = a.0;
        let (mut r, mut place) = (0, 1);
        while x > 0 {
            r += (p - x % p) % p * place;
            x /= p;
            place *= p;
        }
        Fe(r)
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        if self.0.degree == 1 {
            return Fe((u64::from(a.0) * u64::from(b.0) % u64::from(self.0.p)) as u32);
        }
        if let Some(t) = &self.0.tables {
            return Fe(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]);
        }
        schoolbook_mul(&self.0, a, b)
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.0 == 0 {
            return Fe::ZERO;
        }
        let group = u64::from(self.0.size - 1);
        let e = e % group;
        if let Some(t) = &self.0.tables {
            let l = u64::from(t.log[a.0 as usize]) * e % group;
            return Fe(t.exp[l as usize]);
        }
        let (mut base, mut e, mut acc) = (a, e, Fe::ONE);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Fe) -> Result<Fe, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::DivisionByZero);
        }
        if let Some(t) = &self.0.tables {
            let group = self.0.size - 1;
            return Ok(Fe(t.exp[((group - t.log[a.0 as usize]) % group) as usize]));
        }
        Ok(self.pow(a, u64::from(self.0.size) - 2))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^(p^d)`.
    pub fn frobenius(&self, a: Fe, d: u32) -> Fe {
        let d = d % self.0.degree;
        self.pow(a, u64::from(self.0.p).pow(d))
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Fe) -> Result<u64, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let group = u64::from(self.0.size - 1);
        let mut best = group;
        // smallest divisor d of the group order with a^d = 1
        let mut d = 1;
        while d * d <= group {
            if group % d == 0 {
                if self.pow(a, d) == Fe::ONE {
                    return Ok(d);
                }
                if self.pow(a, group / d) == Fe::ONE {
                    best = best.min(group / d);
                }
            }
            d += 1;
        }
        Ok(best)
    }

    /// If `q` is the order of a subfield, its degree over `F_p`.
    pub fn subfield_degree_of_order(&self, q: u64) -> Option<u32> {
        let p = u64::from(self.0.p);
        let mut d = 0;
        let mut acc = 1u64;
        while acc < q {
            acc = acc.checked_mul(p)?;
            d += 1;
        }
        (acc == q && d > 0 && self.0.degree.is_multiple_of(d)).then_some(d)
    }

    /// The elements fixed by `a -> a^(p^d)`; `d` must divide `K`.
    pub fn subfield_elements(&self, d: u32) -> Result<ScalarSet, FieldError> {
        Ok(self.subfield(d)?.elements)
    }

    pub fn subfield(&self, d: u32) -> Result<Subfield, FieldError> {
        if d == 0 || !self.0.degree.is_multiple_of(d) {
            return Err(FieldError::NotADivisor {
                d,
                degree: self.0.degree,
            });
        }
        let elements = if d == self.0.degree {
            self.elements().collect()
        } else {
            self.elements().filter(|&a| self.frobenius(a, d) == a).collect()
        };
        Ok(Subfield {
            degree: d,
            order: u64::from(self.0.p).pow(d),
            elements: ScalarSet(elements),
        })
    }

    pub fn prime_subfield(&self) -> Subfield {
        self.subfield(1).expect("1 divides every degree")
    }

    /// The smallest subfield containing every element of `gens`.
    pub fn generated_subfield(&self, gens: &[Fe]) -> Subfield {
        let k = self.0.degree;
        for d in (1..=k).filter(|d| k.is_multiple_of(*d)) {
            if gens.iter().all(|&a| self.frobenius(a, d) == a) {
                return self.subfield(d).expect("divisor");
            }
        }
        unreachable!("the whole field contains every element")
    }

    /// Smallest set containing `gens` closed under addition and under
    /// multiplication by `scalars`, together with a basis over `scalars`.
    pub fn additive_span(&self, gens: &[Fe], scalars: &Subfield) -> Span {
        let mut members = vec![Fe::ZERO];
        let mut seen = std::collections::HashSet::from([Fe::ZERO]);
        let mut basis = Vec::new();
        for &g in gens {
            if seen.contains(&g) {
                continue;
            }
            basis.push(g);
            let mut grown = Vec::with_capacity(members.len() * scalars.elements.len());
            for &s in &members {
                for c in scalars.elements.iter() {
                    let v = self.add(s, self.mul(c, g));
                    seen.insert(v);
                    grown.push(v);
                }
            }
            members = grown;
        }
        members.sort_unstable();
        members.dedup();
        Span {
            set: ScalarSet(members),
            basis,
        }
    }

    /// The multiplicative group generated by the nonzero elements of `gens`.
    pub fn multiplicative_closure(&self, gens: &[Fe]) -> ScalarSet {
        let gens: Vec<Fe> = gens.iter().copied().filter(|g| !g.is_zero()).collect();
        let mut seen = std::collections::BTreeSet::from([Fe::ONE]);
        let mut frontier = vec![Fe::ONE];
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    frontier.push(y);
                }
            }
        }
        ScalarSet(seen.into_iter().collect())
    }

    /// An element generating the unique cyclic subgroup of order `m` of the
    /// multiplicative group; `m` must divide `p^K - 1`.
    pub fn element_of_order(&self, m: u64) -> Option<Fe> {
        let group = u64::from(self.0.size - 1);
        if m == 0 || group % m != 0 {
            return None;
        }
        self.elements()
            .skip(1)
            .find(|&a| self.order(a).ok() == Some(group))
            .map(|g| self.pow(g, group / m))
    }

    /// Canonical text of an element: a polynomial in `z` in descending degree.
    pub fn format(&self, a: Fe) -> String {
        format_zpoly(&self.coeffs(a))
    }

    /// Parses an element expression such as `z^2+z+1`, `2*z`, `(z+1)*z`.
    pub fn parse_element(&self, text: &str) -> Result<Fe, FieldError> {
        let mut cur = Cursor::new(text);
        let a = self.parse_expr(&mut cur)?;
        cur.finish()?;
        Ok(a)
    }

    pub(crate) fn parse_expr(&self, cur: &mut Cursor<'_>) -> Result<Fe, FieldError> {
        let mut negate = cur.eat(b'-');
        let mut acc = Fe::ZERO;
        loop {
            let mut term = self.parse_factor(cur)?;
            while cur.eat(b'*') {
                let f = self.parse_factor(cur)?;
                term = self.mul(term, f);
            }
            if negate {
                term = self.neg(term);
            }
            acc = self.add(acc, term);
            if cur.eat(b'+') {
                negate = false;
            } else if cur.eat(b'-') {
                negate = true;
            } else {
                return Ok(acc);
            }
        }
    }

    /// One element factor: an integer below `p`, `z` with optional power, or
    /// a parenthesized expression.
    pub(crate) fn parse_factor(&self, cur: &mut Cursor<'_>) -> Result<Fe, FieldError> {
        let column = {
            cur.skip_ws();
            cur.column()
        };
        match cur.peek() {
            Some(b'(') => {
                cur.bump();
                let a = self.parse_expr(cur)?;
                cur.expect(b')')?;
                Ok(a)
            }
            Some(b'z') => {
                cur.bump();
                let e = if cur.eat(b'^') { cur.uint()? } else { 1 };
                let z = self.z().ok_or_else(|| FieldError::ElementNotInField {
                    column,
                    text: "z".into(),
                })?;
                Ok(self.pow(z, e))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = cur.uint()?;
                if n >= u64::from(self.0.p) {
                    return Err(FieldError::ElementNotInField {
                        column,
                        text: n.to_string(),
                    });
                }
                Ok(Fe(n as u32))
            }
            _ => Err(cur.error("a field element").into()),
        }
    }
}

/// Parses a polynomial in `z` with integer coefficients in `[0, p)`.
fn parse_zpoly(cur: &mut Cursor<'_>, p: u64) -> Result<Vec<u32>, FieldError> {
    let mut coeffs: Vec<u32> = Vec::new();
    loop {
        let column = {
            cur.skip_ws();
            cur.column()
        };
        let mut c = 1u64;
        let mut k = 0u64;
        if matches!(cur.peek(), Some(d) if d.is_ascii_digit()) {
            c = cur.uint()?;
            if cur.eat(b'*') {
                cur.expect(b'z').map_err(|_| cur.error("'z'"))?;
                k = if cur.eat(b'^') { cur.uint()? } else { 1 };
            }
        } else if cur.eat(b'z') {
            k = if cur.eat(b'^') { cur.uint()? } else { 1 };
        } else {
            return Err(cur.error("a term of the modulus").into());
        }
        if c >= p || k > 64 {
            return Err(FieldError::ElementNotInField {
                column,
                text: format!("coefficient {c} of z^{k}"),
            });
        }
        let k = k as usize;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, 0);
        }
        coeffs[k] = ((u64::from(coeffs[k]) + c) % p) as u32;
        if !cur.eat(b'+') {
            break;
        }
    }
    while coeffs.len() > 1 && coeffs.last() == Some(&0) {
        coeffs.pop();
    }
    Ok(coeffs)
}

fn schoolbook_mul(f: &Inner, a: Fe, b: Fe) -> Fe {
    let p = f.p;
    let k = f.degree as usize;
    let digits = |mut x: u32| {
        let mut v = vec![0u32; k];
        for d in v.iter_mut() {
            *d = x % p;
            x /= p;
        }
        v
    };
    let (da, db) = (digits(a.0), digits(b.0));
    let mut prod = vec![0u64; 2 * k - 1];
    for (i, &x) in da.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] += u64::from(x) * u64::from(y);
        }
    }
    let prod: Vec<u32> = prod.iter().map(|&c| (c % u64::from(p)) as u32).collect();
    let r = zpoly_rem(&prod, &f.modulus, p);
    Fe(r.iter().rev().fold(0, |acc, &c| acc * p + c))
}

fn build_tables(f: &Inner) -> Tables {
    let group = f.size - 1;
    let generator = (2..f.size)
        .map(Fe)
        .find(|&g| {
            let mut x = g;
            let mut order = 1;
            while x != Fe::ONE {
                x = schoolbook_mul(f, x, g);
                order += 1;
            }
            order == group
        })
        .expect("the multiplicative group of a finite field is cyclic");
    let mut exp = vec![0u32; 2 * group as usize];
    let mut log = vec![0u32; f.size as usize];
    let mut x = Fe::ONE;
    for i in 0..group {
        exp[i as usize] = x.0;
        exp[(i + group) as usize] = x.0;
        log[x.0 as usize] = i;
        x = schoolbook_mul(f, x, generator);
    }
    Tables { log, exp }
}

/// A nonempty, sorted, duplicate-free set of field elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ScalarSet(Vec<Fe>);

impl ScalarSet {
    pub fn new(elements: impl IntoIterator<Item = Fe>) -> Result<ScalarSet, FieldError> {
        let mut v: Vec<Fe> = elements.into_iter().collect();
        if v.is_empty() {
            return Err(FieldError::EmptySet);
        }
        v.sort_unstable();
        v.dedup();
        Ok(ScalarSet(v))
    }

    pub fn zero() -> ScalarSet {
        ScalarSet(vec![Fe::ZERO])
    }

    pub fn singleton(a: Fe) -> ScalarSet {
        ScalarSet(vec![a])
    }

    pub fn contains(&self, a: Fe) -> bool {
        self.0.binary_search(&a).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True for the set `{0}`.
    pub fn is_zero(&self) -> bool {
        self.0 == [Fe::ZERO]
    }

    pub fn iter(&self) -> impl Iterator<Item = Fe> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Fe] {
        &self.0
    }

    pub fn first_nonzero(&self) -> Option<Fe> {
        self.0.iter().copied().find(|a| !a.is_zero())
    }

    pub fn is_subset(&self, other: &ScalarSet) -> bool {
        self.iter().all(|a| other.contains(a))
    }

    /// Every pairwise product of `self` and `other` lies in `target`.
    pub fn products_within(&self, field: &Field, other: &ScalarSet, target: &ScalarSet) -> bool {
        self.iter()
            .all(|a| other.iter().all(|b| target.contains(field.mul(a, b))))
    }

    /// `{a * c : a in self}`.
    pub fn scaled(&self, field: &Field, c: Fe) -> ScalarSet {
        let mut v: Vec<Fe> = self.iter().map(|a| field.mul(a, c)).collect();
        v.sort_unstable();
        v.dedup();
        ScalarSet(v)
    }

    /// Closed under addition and multiplication, contains 1, and every
    /// nonzero element has its inverse inside: a subfield.
    pub fn is_subfield(&self, field: &Field) -> bool {
        self.contains(Fe::ZERO)
            && self.contains(Fe::ONE)
            && self
                .iter()
                .all(|a| self.iter().all(|b| self.contains(field.add(a, b)) && self.contains(field.mul(a, b))))
            && self
                .iter()
                .filter(|a| !a.is_zero())
                .all(|a| self.contains(field.inv(a).expect("nonzero")))
    }

    pub fn format(&self, field: &Field) -> Vec<String> {
        self.iter().map(|a| field.format(a)).collect()
    }
}

/// A subfield `F_q` of the ambient field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subfield {
    degree: u32,
    order: u64,
    elements: ScalarSet,
}

impl Subfield {
    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `q = p^degree`.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn elements(&self) -> &ScalarSet {
        &self.elements
    }
}

/// Output of [`Field::additive_span`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Span {
    pub set: ScalarSet,
    pub basis: Vec<Fe>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf4() -> Field {
        Field::new(2, 2, &[1, 1, 1]).unwrap()
    }

    #[test]
    fn constructs_prime_and_extension_fields() {
        let f2 = Field::new(2, 1, &[1]).unwrap();
        assert_eq!(f2.size(), 2);
        assert_eq!(gf4().size(), 4);
        assert_eq!(Field::new(4, 1, &[]), Err(FieldError::NotPrime(4)));
        assert!(matches!(
            Field::new(2, 2, &[1, 0, 1]),
            Err(FieldError::NotIrreducible { .. })
        ));
        assert!(matches!(
            Field::new(2, 3, &[1, 1]),
            Err(FieldError::DegreeMismatch { .. })
        ));
        assert!(matches!(Field::new(2, 21, &[]), Err(FieldError::TooLarge { .. })));
    }

    #[test]
    fn gf4_arithmetic() {
        let f = gf4();
        let z = f.z().unwrap();
        let z1 = f.add(z, Fe::ONE);
        assert_eq!(f.mul(z, z), z1);
        assert_eq!(f.inv(z).unwrap(), z1);
        assert_eq!(f.pow(z, 3), Fe::ONE);
        assert_eq!(f.inv(Fe::ZERO), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn frobenius_examples() {
        let f = gf4();
        let z = f.z().unwrap();
        assert_eq!(f.frobenius(z, 1), f.add(z, Fe::ONE));
        assert_eq!(f.frobenius(Fe::ONE, 1), Fe::ONE);
        assert_eq!(f.frobenius(z, 2), z);
    }

    #[test]
    fn subfields() {
        let f = gf4();
        assert_eq!(f.subfield_elements(1).unwrap().as_slice(), &[Fe(0), Fe(1)]);
        assert_eq!(f.subfield_elements(2).unwrap().len(), 4);
        let f8 = Field::new(2, 3, &[1, 1, 0, 1]).unwrap();
        assert_eq!(
            f8.subfield_elements(2),
            Err(FieldError::NotADivisor { d: 2, degree: 3 })
        );
        assert_eq!(f.subfield_degree_of_order(4), Some(2));
        assert_eq!(f.subfield_degree_of_order(8), None);
        assert_eq!(f.subfield_degree_of_order(3), None);
    }

    #[test]
    fn additive_span_examples() {
        let f = gf4();
        let f2 = f.prime_subfield();
        let z = f.z().unwrap();
        let s = f.additive_span(&[Fe::ONE], &f2);
        assert_eq!(s.set.as_slice(), &[Fe(0), Fe(1)]);
        assert_eq!(s.basis, vec![Fe::ONE]);
        let s = f.additive_span(&[z], &f2);
        assert_eq!(s.set.as_slice(), &[Fe::ZERO, z]);
        assert_eq!(s.basis, vec![z]);
        let s = f.additive_span(&[Fe::ONE, z], &f2);
        assert_eq!(s.set.len(), 4);
        assert_eq!(s.basis, vec![Fe::ONE, z]);
    }

    #[test]
    fn parse_and_format_round_trip() {
        let f = gf4();
        let z = f.z().unwrap();
        assert_eq!(f.parse_element("z+1").unwrap(), f.add(z, Fe::ONE));
        assert_eq!(f.parse_element("z^2").unwrap(), f.add(z, Fe::ONE));
        assert_eq!(f.parse_element("(z+1)*z").unwrap(), Fe::ONE);
        for a in f.elements() {
            assert_eq!(f.parse_element(&f.format(a)).unwrap(), a);
        }
        assert!(matches!(
            f.parse_element("2"),
            Err(FieldError::ElementNotInField { .. })
        ));
        let f2 = Field::prime(2).unwrap();
        assert!(matches!(
            f2.parse_element("z"),
            Err(FieldError::ElementNotInField { .. })
        ));
        let f9 = Field::new(3, 2, &[1, 0, 1]).unwrap();
        for a in f9.elements() {
            assert_eq!(f9.parse_element(&f9.format(a)).unwrap(), a);
        }
    }

    #[test]
    fn field_text_form() {
        let f = Field::parse("GF(2^2) mod z^2+z+1").unwrap();
        assert_eq!(f, gf4());
        assert_eq!(f.to_string(), "GF(2^2) mod z^2+z+1");
        assert_eq!(Field::parse("GF(3)").unwrap(), Field::prime(3).unwrap());
        assert_eq!(Field::parse(&f.to_string()).unwrap(), f);
        assert!(Field::parse("GF(2^2)").is_err());
        assert!(matches!(
            Field::parse("GF(2^2) mod z^2+1"),
            Err(FieldError::NotIrreducible { .. })
        ));
    }

    #[test]
    fn large_field_without_tables_agrees_with_axioms() {
        // 2^17 > 2^16, so this uses schoolbook multiplication.
        let mut m = vec![0u32; 18];
        m[0] = 1;
        m[3] = 1;
        m[17] = 1;
        let f = Field::new(2, 17, &m).unwrap();
        let a = f.element(12345).unwrap();
        let b = f.element(99999).unwrap();
        let c = f.element(131000).unwrap();
        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE);
        assert_eq!(f.pow(a, u64::from(f.size()) - 1), Fe::ONE);
    }

    #[test]
    fn exhaustive_frobenius_is_a_ring_homomorphism() {
        for f in [gf4(), Field::new(3, 2, &[1, 0, 1]).unwrap(), Field::new(2, 3, &[1, 1, 0, 1]).unwrap()] {
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.frobenius(f.add(a, b), 1), f.add(f.frobenius(a, 1), f.frobenius(b, 1)));
                    assert_eq!(f.frobenius(f.mul(a, b), 1), f.mul(f.frobenius(a, 1), f.frobenius(b, 1)));
                }
            }
        }
    }

    #[test]
    fn subfields_are_closed() {
        let f16 = Field::new(2, 4, &[1, 1, 0, 0, 1]).unwrap();
        for d in [1, 2, 4] {
            let s = f16.subfield_elements(d).unwrap();
            assert_eq!(s.len() as u64, 2u64.pow(d));
            assert!(s.is_subfield(&f16));
        }
    }

    #[test]
    fn generated_subfield_and_closures() {
        let f = gf4();
        let z = f.z().unwrap();
        assert_eq!(f.generated_subfield(&[Fe::ONE]).order(), 2);
        assert_eq!(f.generated_subfield(&[Fe::ZERO, z]).order(), 4);
        assert_eq!(f.multiplicative_closure(&[z]).len(), 3);
        assert_eq!(f.multiplicative_closure(&[Fe::ZERO]).len(), 1);
        let g = f.element_of_order(3).unwrap();
        assert_eq!(f.order(g).unwrap(), 3);
    }
}
