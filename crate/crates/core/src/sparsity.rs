//! Sparsity patterns, their groups, and the block structure of those groups:
//! the natural preorder, transvection sets, rescaling, the sets `k_rs`, block
//! classification and the order formula.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::ffield::{Fe, Field, FieldError, ScalarSet};
use crate::matgroup::{
    gl_order, group_closure, is_irreducible, sl_order, GroupClosure, MatError, Matrix, DEFAULT_STATE_CAP,
};
use crate::text::{Cursor, TextError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("line {line}, column {column}: expected {expected}")]
    SyntaxError {
        line: usize,
        column: usize,
        expected: String,
    },
    #[error("line {line}, column {column}: '{text}' is not an element of the field")]
    ElementNotInField { line: usize, column: usize, text: String },
    #[error("line {line}: empty set")]
    EmptySet { line: usize },
    #[error("line {line}: sigma {i} {j} given twice")]
    DuplicateEntry { line: usize, i: usize, j: usize },
    #[error("line {line}: {source}")]
    Field { line: usize, source: FieldError },
}

impl PatternError {
    fn at(line: usize, e: FieldError) -> PatternError {
        match e {
            FieldError::Syntax(TextError { column, expected }) => PatternError::SyntaxError { line, column, expected },
            FieldError::ElementNotInField { column, text } => PatternError::ElementNotInField { line, column, text },
            FieldError::EmptySet => PatternError::EmptySet { line },
            source => PatternError::Field { line, source },
        }
    }

    fn syntax(line: usize, e: TextError) -> PatternError {
        PatternError::SyntaxError {
            line,
            column: e.column,
            expected: e.expected,
        }
    }
}

#[derive(Debug, Error)]
pub enum SparsityError {
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error("transvection sets between classes {r} and {s} are not uniform after rescaling")]
    UniformityFailed { r: usize, s: usize },
    #[error("structure assertion ({tag}) failed")]
    AssertionFailed { tag: String, report: Box<StructureReport> },
}

/// The map `sigma` on `n x n` positions with defaults applied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsityPattern {
    field: Field,
    n: usize,
    sigma: Vec<ScalarSet>,
}

impl SparsityPattern {
    /// All off-diagonal sets `{0}`, all diagonal sets `{1}`.
    pub fn new(field: &Field, n: usize) -> Self {
        let sigma = (0..n * n)
            .map(|k| if k / n == k % n { ScalarSet::singleton(Fe::ONE) } else { ScalarSet::zero() })
            .collect();
        SparsityPattern {
            field: field.clone(),
            n,
            sigma,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `sigma(i, j)`, 0-based.
    pub fn get(&self, i: usize, j: usize) -> &ScalarSet {
        &self.sigma[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, s: ScalarSet) {
        self.sigma[i * self.n + j] = s;
    }

    fn is_default(&self, i: usize, j: usize) -> bool {
        let s = self.get(i, j);
        if i == j {
            *s == ScalarSet::singleton(Fe::ONE)
        } else {
            s.is_zero()
        }
    }

    /// The pattern in the basis `e_{perm[0]}, e_{perm[1]}, ...`.
    pub fn permuted(&self, perm: &[usize]) -> SparsityPattern {
        let mut out = SparsityPattern::new(&self.field, self.n);
        for (a, &i) in perm.iter().enumerate() {
            for (b, &j) in perm.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    /// Generators of the sparsity group, with each transvection family
    /// replaced by an `F_p`-basis of its additive span and each diagonal
    /// family by one generator of its cyclic closure.
    pub fn generators(&self) -> Vec<Matrix> {
        let f = &self.field;
        let prime = f.prime_subfield();
        let mut gens = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                let s = self.get(i, j);
                if i == j {
                    let m = f.multiplicative_closure(s.as_slice()).len() as u64;
                    if m > 1 {
                        let g = f.element_of_order(m).expect("closure order divides the group order");
                        gens.push(Matrix::diagonal(f, self.n, i, g).expect("nonzero"));
                    }
                } else {
                    for b in f.additive_span(s.as_slice(), &prime).basis {
                        gens.push(Matrix::transvection(f, self.n, i, j, b).expect("distinct indices"));
                    }
                }
            }
        }
        gens
    }
}

/// Parses the pattern grammar: `field ...`, `n <int>`, `sigma <i> <j> : <set>`.
pub fn parse_pattern(text: &str) -> Result<SparsityPattern, PatternError> {
    let mut field: Option<Field> = None;
    let mut pattern: Option<SparsityPattern> = None;
    let mut given = std::collections::HashSet::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let body = raw.split('#').next().unwrap_or("");
        let mut cur = Cursor::new(body);
        if cur.at_end() {
            continue;
        }
        let syn = |e: TextError| PatternError::syntax(line, e);
        if cur.eat_word("field") {
            if field.is_some() {
                return Err(syn(cur.error("a single 'field' directive")));
            }
            let f = Field::parse_cursor(&mut cur).map_err(|e| PatternError::at(line, e))?;
            cur.finish().map_err(syn)?;
            field = Some(f);
        } else if cur.eat_word("sigma") {
            let Some(pat) = pattern.as_mut() else {
                return Err(syn(cur.error("'field' and 'n' before 'sigma'")));
            };
            let n = pat.n;
            let index = |cur: &mut Cursor<'_>| -> Result<usize, PatternError> {
                cur.skip_ws();
                let column = cur.column();
                let k = cur.uint().map_err(syn)?;
                if k == 0 || k > n as u64 {
                    return Err(PatternError::SyntaxError {
                        line,
                        column,
                        expected: format!("an index in 1..={n}"),
                    });
                }
                Ok(k as usize - 1)
            };
            let i = index(&mut cur)?;
            let j = index(&mut cur)?;
            cur.expect(b':').map_err(syn)?;
            let set = parse_set(&pat.field, &mut cur, line)?;
            cur.finish().map_err(syn)?;
            if !given.insert((i, j)) {
                return Err(PatternError::DuplicateEntry {
                    line,
                    i: i + 1,
                    j: j + 1,
                });
            }
            pat.set(i, j, set);
        } else if cur.eat_word("n") {
            let Some(f) = field.as_ref() else {
                return Err(syn(cur.error("a 'field' directive first")));
            };
            if pattern.is_some() {
                return Err(syn(cur.error("a single 'n' directive")));
            }
            cur.skip_ws();
            let column = cur.column();
            let n = cur.uint().map_err(syn)?;
            if n == 0 || n > 64 {
                return Err(PatternError::SyntaxError {
                    line,
                    column,
                    expected: "a dimension in 1..=64".into(),
                });
            }
            cur.finish().map_err(syn)?;
            pattern = Some(SparsityPattern::new(f, n as usize));
        } else {
            return Err(syn(cur.error("'field', 'n' or 'sigma'")));
        }
    }
    pattern.ok_or_else(|| PatternError::SyntaxError {
        line: text.lines().count().max(1),
        column: 1,
        expected: if field.is_none() { "a 'field' directive" } else { "an 'n' directive" }.into(),
    })
}

fn parse_set(field: &Field, cur: &mut Cursor<'_>, line: usize) -> Result<ScalarSet, PatternError> {
    let syn = |e: TextError| PatternError::syntax(line, e);
    if cur.eat(b'{') {
        if cur.eat(b'}') {
            return Err(PatternError::EmptySet { line });
        }
        let mut elems = Vec::new();
        loop {
            elems.push(field.parse_expr(cur).map_err(|e| PatternError::at(line, e))?);
            if cur.eat(b'}') {
                break;
            }
            cur.expect(b',').map_err(syn)?;
        }
        return ScalarSet::new(elems).map_err(|e| PatternError::at(line, e));
    }
    if cur.eat_word("full") {
        return Ok(ScalarSet::new(field.elements()).expect("fields are nonempty"));
    }
    if cur.eat_word("zero") {
        return Ok(ScalarSet::zero());
    }
    if cur.eat_word("GF") {
        cur.expect(b'(').map_err(syn)?;
        cur.skip_ws();
        let column = cur.column();
        let p = cur.uint().map_err(syn)?;
        let d = if cur.eat(b'^') { cur.uint().map_err(syn)? } else { 1 };
        cur.expect(b')').map_err(syn)?;
        if p != u64::from(field.characteristic()) {
            return Err(PatternError::ElementNotInField {
                line,
                column,
                text: format!("GF({p}^{d})"),
            });
        }
        let d = u32::try_from(d).unwrap_or(u32::MAX);
        return field.subfield_elements(d).map_err(|e| PatternError::at(line, e));
    }
    Err(syn(cur.error("a set: '{...}', 'GF(p^d)', 'full' or 'zero'")))
}

impl fmt::Display for SparsityPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "field {}", self.field)?;
        writeln!(f, "n {}", self.n)?;
        for i in 0..self.n {
            for j in 0..self.n {
                if self.is_default(i, j) {
                    continue;
                }
                let s = self.get(i, j);
                if s.len() == self.field.size() as usize {
                    writeln!(f, "sigma {} {} : full", i + 1, j + 1)?;
                } else {
                    writeln!(f, "sigma {} {} : {{{}}}", i + 1, j + 1, s.format(&self.field).join(","))?;
                }
            }
        }
        Ok(())
    }
}

/// Equivalence classes of the natural preorder, listed in a topological
/// order of the condensation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    classes: Vec<Vec<usize>>,
    permutation: Vec<usize>,
}

impl BlockDecomposition {
    /// Classes (0-based indices, each sorted) in natural order.
    pub fn from_classes(classes: Vec<Vec<usize>>) -> Self {
        let permutation = classes.iter().flatten().copied().collect();
        BlockDecomposition { classes, permutation }
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn t(&self) -> usize {
        self.classes.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    /// Position `k` of the natural basis holds original index `permutation[k]`.
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// The classes as index ranges of the naturally ordered basis.
    pub fn ranges(&self) -> Vec<Range<usize>> {
        let mut start = 0;
        self.classes
            .iter()
            .map(|c| {
                let r = start..start + c.len();
                start += c.len();
                r
            })
            .collect()
    }

    /// The same decomposition expressed in the naturally ordered basis.
    pub fn natural(&self) -> BlockDecomposition {
        BlockDecomposition::from_classes(self.ranges().into_iter().map(|r| r.collect()).collect())
    }
}

/// Strongly connected components of the digraph `i -> j` iff `i != j` and
/// `sigma(i, j) != {0}`, in topological order with ties broken by the
/// smallest member.
pub fn block_decomposition(pat: &SparsityPattern) -> BlockDecomposition {
    let n = pat.n;
    let mut reach = vec![vec![false; n]; n];
    for (i, row) in reach.iter_mut().enumerate() {
        for (j, r) in row.iter_mut().enumerate() {
            *r = i == j || !pat.get(i, j).is_zero();
        }
    }
    for k in 0..n {
        let via = reach[k].clone();
        for row in reach.iter_mut().filter(|row| row[k]) {
            for (r, &v) in row.iter_mut().zip(&via) {
                *r |= v;
            }
        }
    }
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if class_of[i] != usize::MAX {
            continue;
        }
        let members: Vec<usize> = (i..n).filter(|&j| reach[i][j] && reach[j][i]).collect();
        for &j in &members {
            class_of[j] = classes.len();
        }
        classes.push(members);
    }
    // Kahn's algorithm; classes are already indexed by smallest member.
    let t = classes.len();
    let mut indegree = vec![0usize; t];
    let mut edges = vec![Vec::new(); t];
    for a in 0..t {
        for b in 0..t {
            if a != b && reach[classes[a][0]][classes[b][0]] {
                edges[a].push(b);
                indegree[b] += 1;
            }
        }
    }
    let mut ready: std::collections::BTreeSet<usize> = (0..t).filter(|&a| indegree[a] == 0).collect();
    let mut order = Vec::with_capacity(t);
    while let Some(a) = ready.pop_first() {
        order.push(a);
        for &b in &edges[a] {
            indegree[b] -= 1;
            if indegree[b] == 0 {
                ready.insert(b);
            }
        }
    }
    BlockDecomposition::from_classes(order.into_iter().map(|a| classes[a].clone()).collect())
}

/// The group generated by `T_ij(a)`, `a` in `sigma(i,j)`, and `D_i(a)`,
/// `a` in `sigma(i,i) \ {0}`.
pub fn enumerate_sparsity_group(pat: &SparsityPattern, cap: usize) -> Result<GroupClosure, MatError> {
    group_closure(&pat.field, pat.n, &pat.generators(), cap)
}

/// `S(i,j) = {a : T_ij(a) in G}` off the diagonal, `{a : D_i(a) in G}` on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransvectionSets {
    n: usize,
    sets: Vec<ScalarSet>,
}

impl TransvectionSets {
    pub fn get(&self, i: usize, j: usize) -> &ScalarSet {
        &self.sets[i * self.n + j]
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `S(i,j) S(j,k) ⊆ S(i,k)` for all `i != k`.
    pub fn transitivity_holds(&self, field: &Field) -> bool {
        let n = self.n;
        (0..n).all(|i| {
            (0..n).all(|j| {
                (0..n)
                    .filter(|&k| k != i)
                    .all(|k| self.get(i, j).products_within(field, self.get(j, k), self.get(i, k)))
            })
        })
    }
}

/// Membership scan over every field element.
pub fn transvection_sets(group: &GroupClosure) -> TransvectionSets {
    let n = group.dim();
    let f = group.field();
    let identity = Matrix::identity(f, n);
    let mut sets = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let members = f.elements().filter(|&a| {
                let mut m = identity.clone();
                m.set(i, j, a);
                group.contains(&m)
            });
            sets.push(ScalarSet::new(members).expect("0 or 1 is always a member"));
        }
    }
    TransvectionSets { n, sets }
}

/// Conjugates `group` by a diagonal `D` so that the transvection sets are
/// uniform on every class pair, except inside classes of size two.
///
/// Inside a class every vertex is scaled so that `1 ∈ S(root, j)` for the
/// smallest index `root`. Each later class is then scaled as a whole so that
/// `1` lies in the first nonzero transvection set from an earlier class.
/// `blocks` must be given in the coordinates of `group`.
pub fn rescale_basis(group: &GroupClosure, blocks: &BlockDecomposition) -> Result<(Matrix, GroupClosure), SparsityError> {
    let f = group.field();
    let n = group.dim();
    let s = transvection_sets(group);
    let mut d = vec![Fe::ONE; n];
    let classes = blocks.classes();
    for (ci, class) in classes.iter().enumerate() {
        let root = class[0];
        for &j in &class[1..] {
            let a = s.get(root, j).first_nonzero().ok_or(SparsityError::UniformityFailed { r: ci + 1, s: ci + 1 })?;
            d[j] = f.inv(a).expect("nonzero");
        }
        let link = classes[..ci]
            .iter()
            .flatten()
            .flat_map(|&i| class.iter().map(move |&j| (i, j)))
            .find(|&(i, j)| !s.get(i, j).is_zero());
        if let Some((i, j)) = link {
            let ratio = f.div(d[j], d[i]).expect("nonzero");
            let a = s.get(i, j).scaled(f, ratio).first_nonzero().expect("nonzero set");
            let c = f.inv(a).expect("nonzero");
            for &j in class {
                d[j] = f.mul(d[j], c);
            }
        }
    }
    let dm = Matrix::diag(f, &d);
    let conj = group.conjugate(&dm)?;
    let s2 = transvection_sets(&conj);
    for (r, jr) in classes.iter().enumerate() {
        for (sc, js) in classes.iter().enumerate().skip(r) {
            if r == sc && jr.len() <= 2 {
                continue;
            }
            let mut pairs = jr.iter().flat_map(|&i| js.iter().map(move |&j| (i, j))).filter(|(i, j)| i != j);
            let Some((i0, j0)) = pairs.next() else { continue };
            let first = s2.get(i0, j0);
            if pairs.any(|(i, j)| s2.get(i, j) != first) {
                return Err(SparsityError::UniformityFailed { r: r + 1, s: sc + 1 });
            }
        }
    }
    Ok((dm, conj))
}

/// Classification of a diagonal block group `G_{X_r}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "type")]
pub enum BlockType {
    /// One variable, trivial action.
    Trivial,
    /// One variable scaled by a cyclic group of order `m`.
    OneDim { m: u64 },
    /// `{M in GL(n_r, F_q) : det M in K}` with `|K| = m`.
    DetLevel { q: u64, m: u64 },
    /// A 2x2 block that is not determinant-level.
    TwoByTwo,
    /// A block of size at least three that is not determinant-level.
    Unclassified,
}

impl fmt::Display for BlockType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockType::Trivial => write!(f, "Trivial"),
            BlockType::OneDim { m } => write!(f, "OneDim({m})"),
            BlockType::DetLevel { q, m } => write!(f, "DetLevel{{q={q},m={m}}}"),
            BlockType::TwoByTwo => write!(f, "TwoByTwo"),
            BlockType::Unclassified => write!(f, "Unclassified"),
        }
    }
}

/// For a 2x2 block: whether `SL(2,q) <= G_X <= GL(2,q)` is possible by
/// cardinality, for each subfield `F_q` of `k_rr`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubfieldComparison {
    pub block: usize,
    pub q: u64,
    pub sl_order: u128,
    pub gl_order: u128,
    pub block_order: usize,
    pub compatible: bool,
}

#[derive(Debug, Clone)]
pub struct StructureReport {
    pub field: Field,
    pub n: usize,
    /// Classes in original coordinates.
    pub blocks: BlockDecomposition,
    /// Diagonal of the rescaling `D`, in the naturally ordered basis.
    pub rescaling: Vec<Fe>,
    /// `C = P D`: column `k` is `d_k e_{perm[k]}`. The analyzed group is
    /// `C^{-1} G C`.
    pub change_of_basis: Matrix,
    /// `k[r][s]` for all class pairs.
    pub k: Vec<Vec<ScalarSet>>,
    pub block_types: Vec<BlockType>,
    pub block_orders: Vec<usize>,
    /// Determinant values taken by each block group.
    pub block_determinants: Vec<ScalarSet>,
    /// Assertions `a`..`f`.
    pub assertions: BTreeMap<char, bool>,
    /// Further exact checks: `transitivity`, `block_form`, `det_group`, and
    /// `irreducible_iff_t1` when the state space was small enough.
    pub checks: BTreeMap<&'static str, bool>,
    pub order: usize,
    pub predicted_order: Option<u128>,
    pub irreducible: Option<bool>,
    pub exceptional: Vec<SubfieldComparison>,
    /// The rescaled group, in the naturally ordered basis.
    pub group: GroupClosure,
    pub block_groups: Vec<GroupClosure>,
    pub transvection_sets: TransvectionSets,
}

impl StructureReport {
    pub fn t(&self) -> usize {
        self.blocks.t()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.sizes()
    }

    /// The first failing assertion or check, if any. Assertion (e) is only
    /// claimed for blocks of size other than two.
    pub fn first_failure(&self) -> Option<String> {
        self.assertions
            .iter()
            .find(|(_, &ok)| !ok)
            .map(|(c, _)| c.to_string())
            .or_else(|| self.checks.iter().find(|(_, &ok)| !ok).map(|(c, _)| c.to_string()))
    }

    pub fn to_json(&self) -> Value {
        let f = &self.field;
        let pf = |b: bool| if b { "pass" } else { "fail" };
        let t = self.t();
        let mut k = serde_json::Map::new();
        for r in 0..t {
            for s in 0..t {
                k.insert(format!("{},{}", r + 1, s + 1), json!(self.k[r][s].format(f)));
            }
        }
        json!({
            "field": f.to_string(),
            "n": self.n,
            "t": t,
            "classes": self.blocks.classes().iter().map(|c| c.iter().map(|i| i + 1).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "permutation": self.blocks.permutation().iter().map(|i| i + 1).collect::<Vec<_>>(),
            "order": self.order,
            "predicted_order": self.predicted_order.map(|o| o.to_string()),
            "k": k,
            "block_types": self.block_types,
            "block_orders": self.block_orders,
            "assertions": self.assertions.iter().map(|(c, &b)| (c.to_string(), json!(pf(b)))).collect::<serde_json::Map<_, _>>(),
            "checks": self.checks.iter().map(|(c, &b)| (c.to_string(), json!(pf(b)))).collect::<serde_json::Map<_, _>>(),
            "irreducible": self.irreducible,
            "rescaling": self.rescaling.iter().map(|&a| f.format(a)).collect::<Vec<_>>(),
            "change_of_basis": self.change_of_basis.to_string(),
            "exceptional": self.exceptional,
        })
    }

    pub fn to_text(&self) -> String {
        let f = &self.field;
        let pf = |b: bool| if b { "pass" } else { "fail" };
        let mut out = String::new();
        let classes: Vec<String> = self
            .blocks
            .classes()
            .iter()
            .map(|c| format!("{{{}}}", c.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        out += &format!("field: {}\nn: {}\nt: {}\nclasses: {}\n", f, self.n, self.t(), classes.join(" "));
        out += &format!(
            "order: {}\npredicted order: {}\n",
            self.order,
            self.predicted_order.map_or("overflow".to_string(), |o| o.to_string())
        );
        out += &format!(
            "rescaling: diag({})\n",
            self.rescaling.iter().map(|&a| f.format(a)).collect::<Vec<_>>().join(", ")
        );
        for (r, ty) in self.block_types.iter().enumerate() {
            out += &format!("block {}: size {}, |G_X| = {}, {}\n", r + 1, self.blocks.classes()[r].len(), self.block_orders[r], ty);
        }
        for (r, row) in self.k.iter().enumerate() {
            for (s, set) in row.iter().enumerate() {
                if r <= s {
                    out += &format!("k[{},{}] = {{{}}}\n", r + 1, s + 1, set.format(f).join(","));
                }
            }
        }
        for (c, &b) in &self.assertions {
            out += &format!("assertion ({c}): {}\n", pf(b));
        }
        for (c, &b) in &self.checks {
            out += &format!("check {c}: {}\n", pf(b));
        }
        if let Some(irr) = self.irreducible {
            out += &format!("irreducible: {irr}\n");
        }
        for e in &self.exceptional {
            out += &format!(
                "block {}: |SL(2,{q})| = {}, |GL(2,{q})| = {}, |G_X| = {} -> {}\n",
                e.block,
                e.sl_order,
                e.gl_order,
                e.block_order,
                if e.compatible { "compatible" } else { "incompatible" },
                q = e.q
            );
        }
        out
    }
}

fn common_set(s: &TransvectionSets, rows: &[usize], cols: &[usize]) -> ScalarSet {
    rows.iter()
        .flat_map(|&i| cols.iter().map(move |&j| (i, j)))
        .find(|(i, j)| i != j)
        .map(|(i, j)| s.get(i, j).clone())
        .unwrap_or_else(ScalarSet::zero)
}

/// The full structure analysis, returned even when assertions fail.
pub fn analyze(pat: &SparsityPattern, cap: usize) -> Result<StructureReport, SparsityError> {
    let f = pat.field().clone();
    let n = pat.dim();
    let blocks = block_decomposition(pat);
    let natural = blocks.natural();
    let ppat = pat.permuted(blocks.permutation());
    let g0 = enumerate_sparsity_group(&ppat, cap)?;
    let (dm, group) = rescale_basis(&g0, &natural)?;
    let s = transvection_sets(&group);
    let classes = natural.classes();
    let ranges = natural.ranges();
    let t = classes.len();

    let mut k = vec![vec![ScalarSet::zero(); t]; t];
    for r in 0..t {
        for sc in r..t {
            k[r][sc] = if r < sc {
                common_set(&s, &classes[r], &classes[sc])
            } else {
                match classes[r].as_slice() {
                    &[i] => f.generated_subfield(ppat.get(i, i).as_slice()).elements().clone(),
                    &[i, j] => {
                        let gens: Vec<Fe> = s.get(i, j).iter().chain(s.get(j, i).iter()).collect();
                        f.generated_subfield(&gens).elements().clone()
                    }
                    c => common_set(&s, c, c),
                }
            };
        }
    }

    let mut block_groups = Vec::with_capacity(t);
    let mut block_types = Vec::with_capacity(t);
    let mut block_orders = Vec::with_capacity(t);
    let mut block_determinants = Vec::with_capacity(t);
    let mut e_ok = true;
    let mut det_group_ok = true;
    let mut exceptional = Vec::new();
    for (r, class) in classes.iter().enumerate() {
        let nr = class.len();
        let gx = group.diagonal_block_group(class, cap)?;
        let kr = &k[r][r];
        let q = kr.len() as u64;
        let entries_in_k = gx.elements().iter().all(|m| m.entries().iter().all(|&a| kr.contains(a)));
        let dets = ScalarSet::new(gx.elements().iter().map(Matrix::det)).expect("nonempty group");
        let sl_count = gx.elements().iter().filter(|m| m.det() == Fe::ONE).count() as u128;
        let between = entries_in_k && kr.is_subfield(&f) && sl_count == sl_order(nr as u32, q);
        let diag_sets: Vec<Fe> = class.iter().flat_map(|&i| ppat.get(i, i).iter()).collect();
        let kgroup = f.multiplicative_closure(&diag_sets);
        let ty = if nr == 1 {
            if gx.order() == 1 {
                BlockType::Trivial
            } else {
                BlockType::OneDim { m: gx.order() as u64 }
            }
        } else if between {
            det_group_ok &= dets == kgroup;
            BlockType::DetLevel { q, m: dets.len() as u64 }
        } else if nr == 2 {
            BlockType::TwoByTwo
        } else {
            BlockType::Unclassified
        };
        if nr != 2 {
            e_ok &= between;
        }
        if ty == BlockType::TwoByTwo {
            let p = u64::from(f.characteristic());
            let mut deg = 0u32;
            while p.pow(deg) < q {
                deg += 1;
            }
            for d in (1..=deg).filter(|d| deg.is_multiple_of(*d)) {
                let sub_q = p.pow(d);
                let (sl, gl) = (sl_order(2, sub_q), gl_order(2, sub_q));
                let o = gx.order() as u128;
                exceptional.push(SubfieldComparison {
                    block: r + 1,
                    q: sub_q,
                    sl_order: sl,
                    gl_order: gl,
                    block_order: gx.order(),
                    compatible: o.is_multiple_of(sl) && gl % o == 0,
                });
            }
        }
        block_types.push(ty);
        block_orders.push(gx.order());
        block_determinants.push(dets);
        block_groups.push(gx);
    }

    let mut predicted: Option<u128> = Some(1);
    for &o in &block_orders {
        predicted = predicted.and_then(|p| p.checked_mul(o as u128));
    }
    for r in 0..t {
        for sc in r + 1..t {
            let e = (classes[r].len() * classes[sc].len()) as u32;
            predicted = predicted.and_then(|p| (k[r][sc].len() as u128).checked_pow(e).and_then(|x| p.checked_mul(x)));
        }
    }

    let mut assertions = BTreeMap::new();
    assertions.insert('a', (0..t).all(|r| k[r][r].is_subfield(&f)));
    let below_zero = (0..t).all(|r| {
        (0..r).all(|sc| {
            classes[r]
                .iter()
                .all(|&i| classes[sc].iter().all(|&j| s.get(i, j).is_zero()))
        })
    });
    assertions.insert('b', below_zero);
    let c_ok = (0..t).all(|r| (r..t).all(|sc| (sc..t).all(|l| k[r][sc].products_within(&f, &k[sc][l], &k[r][l]))));
    assertions.insert('c', c_ok);
    let block_of = |i: usize| ranges.iter().position(|rg| rg.contains(&i)).expect("partition");
    let mut block_form = true;
    let mut shape_ok = true;
    for m in group.elements() {
        for i in 0..n {
            for j in 0..n {
                let (r, sc) = (block_of(i), block_of(j));
                let a = m.get(i, j);
                if r > sc && !a.is_zero() {
                    block_form = false;
                }
                if r < sc && !k[r][sc].contains(a) {
                    shape_ok = false;
                }
            }
        }
        for (r, class) in classes.iter().enumerate() {
            if !block_groups[r].contains(&m.principal_block(class)) {
                shape_ok = false;
            }
        }
    }
    assertions.insert('d', block_form && shape_ok && predicted == Some(group.order() as u128));
    assertions.insert('e', e_ok);
    let f_ok = (0..t).all(|r| {
        (r + 1..t).all(|sc| {
            let set = &k[r][sc];
            set.contains(Fe::ZERO)
                && set.iter().all(|a| set.iter().all(|b| set.contains(f.add(a, b))))
                && classes[r].iter().all(|&i| classes[sc].iter().all(|&j| s.get(i, j) == set))
        })
    });
    assertions.insert('f', f_ok);

    let irreducible = match is_irreducible(&group, DEFAULT_STATE_CAP) {
        Ok(b) => Some(b),
        Err(MatError::StateSpaceTooLarge { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let mut checks = BTreeMap::new();
    checks.insert("transitivity", s.transitivity_holds(&f));
    checks.insert("block_form", block_form);
    checks.insert("det_group", det_group_ok);
    if let Some(irr) = irreducible {
        checks.insert("irreducible_iff_t1", irr == (t == 1));
    }

    let perm = blocks.permutation();
    let mut c = Matrix::identity(&f, n);
    for (col, &orig) in perm.iter().enumerate() {
        for row in 0..n {
            c.set(row, col, if row == orig { dm.get(col, col) } else { Fe::ZERO });
        }
    }
    let rescaling = (0..n).map(|i| dm.get(i, i)).collect();
    Ok(StructureReport {
        field: f,
        n,
        blocks,
        rescaling,
        change_of_basis: c,
        k,
        block_types,
        block_orders,
        block_determinants,
        assertions,
        checks,
        order: group.order(),
        predicted_order: predicted,
        irreducible,
        exceptional,
        group,
        block_groups,
        transvection_sets: s,
    })
}

/// Like [`analyze`], but fails with `AssertionFailed` naming the first
/// assertion or check that does not hold.
pub fn structure_report(pat: &SparsityPattern, cap: usize) -> Result<StructureReport, SparsityError> {
    let report = analyze(pat, cap)?;
    match report.first_failure() {
        Some(tag) => Err(SparsityError::AssertionFailed {
            tag,
            report: Box::new(report),
        }),
        None => Ok(report),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::DEFAULT_CAP;

    const ORDER10: &str = "\
field GF(2^2) mod z^2+z+1
n 2
sigma 1 1 : GF(2^1)
sigma 1 2 : {z}
sigma 2 1 : {1}
sigma 2 2 : GF(2)
";

    const PARABOLIC: &str = "\
field GF(2)
n 3
sigma 1 2 : full
sigma 1 3 : full
sigma 2 3 : full
sigma 3 2 : full
";

    fn full(n: usize) -> String {
        let mut s = format!("field GF(2)\nn {n}\n");
        for i in 1..=n {
            for j in 1..=n {
                s += &format!("sigma {i} {j} : full\n");
            }
        }
        s
    }

    #[test]
    fn parses_order10_pattern() {
        let pat = parse_pattern(ORDER10).unwrap();
        let f = pat.field().clone();
        let z = f.z().unwrap();
        assert_eq!(pat.dim(), 2);
        assert_eq!(*pat.get(0, 1), ScalarSet::singleton(z));
        assert_eq!(*pat.get(1, 0), ScalarSet::singleton(Fe::ONE));
        assert_eq!(pat.get(0, 0).len(), 2);
    }

    #[test]
    fn defaults_and_errors() {
        let pat = parse_pattern("field GF(2^1)\nn 3\n").unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { ScalarSet::singleton(Fe::ONE) } else { ScalarSet::zero() };
                assert_eq!(*pat.get(i, j), expect);
            }
        }
        assert_eq!(enumerate_sparsity_group(&pat, DEFAULT_CAP).unwrap().order(), 1);
        assert_eq!(
            parse_pattern("field GF(2)\nn 2\nsigma 1 2 : {}\n"),
            Err(PatternError::EmptySet { line: 3 })
        );
        assert!(matches!(
            parse_pattern("field GF(2)\nn 2\nsigma 1 2 : {1}\nsigma 1 2 : {0}\n"),
            Err(PatternError::DuplicateEntry { line: 4, i: 1, j: 2 })
        ));
        assert!(matches!(
            parse_pattern("field GF(2)\nn 2\nsigma 1 2 : {z}\n"),
            Err(PatternError::ElementNotInField { line: 3, .. })
        ));
        assert!(matches!(
            parse_pattern("field GF(2)\nn 2\nsigma 1 2 {1}\n"),
            Err(PatternError::SyntaxError { line: 3, .. })
        ));
        assert!(matches!(
            parse_pattern("field GF(2)\nn 2\nsigma 1 3 : {1}\n"),
            Err(PatternError::SyntaxError { line: 3, column: 9, .. })
        ));
        assert!(matches!(
            parse_pattern("field GF(2^2) mod z^2+1\nn 2\n"),
            Err(PatternError::Field { line: 1, source: FieldError::NotIrreducible { .. } })
        ));
    }

    #[test]
    fn print_round_trip() {
        for text in [ORDER10.to_string(), PARABOLIC.to_string(), full(3)] {
            let pat = parse_pattern(&text).unwrap();
            let printed = pat.to_string();
            let again = parse_pattern(&printed).unwrap();
            assert_eq!(again, pat);
            assert_eq!(again.to_string(), printed);
        }
    }

    #[test]
    fn decompositions() {
        let order10 = block_decomposition(&parse_pattern(ORDER10).unwrap());
        assert_eq!(order10.classes(), &[vec![0, 1]]);
        let diag = block_decomposition(&parse_pattern("field GF(2)\nn 3\n").unwrap());
        assert_eq!(diag.classes(), &[vec![0], vec![1], vec![2]]);
        assert_eq!(diag.permutation(), &[0, 1, 2]);
        let para = block_decomposition(&parse_pattern(PARABOLIC).unwrap());
        assert_eq!(para.classes(), &[vec![0], vec![1, 2]]);
        // 3 -> 1 forces class {3} before {1}
        let rev = block_decomposition(&parse_pattern("field GF(2)\nn 3\nsigma 3 1 : {1}\n").unwrap());
        assert_eq!(rev.classes(), &[vec![1], vec![2], vec![0]]);
        assert_eq!(rev.permutation(), &[1, 2, 0]);
    }

    #[test]
    fn group_orders() {
        let order = |t: &str| enumerate_sparsity_group(&parse_pattern(t).unwrap(), DEFAULT_CAP).unwrap().order();
        assert_eq!(order(ORDER10), 10);
        assert_eq!(order(&full(2)), 6);
        assert_eq!(order(&full(3)), 168);
        assert_eq!(order(PARABOLIC), 24);
        let diag = "field GF(3^2) mod z^2+1\nn 2\nsigma 1 1 : {2}\nsigma 2 2 : {z}\n";
        assert_eq!(order(diag), 2 * 4);
    }

    #[test]
    fn transvection_set_examples() {
        let f = Field::prime(2).unwrap();
        let g = enumerate_sparsity_group(&parse_pattern(&full(2)).unwrap(), DEFAULT_CAP).unwrap();
        let s = transvection_sets(&g);
        let all = ScalarSet::new([Fe::ZERO, Fe::ONE]).unwrap();
        assert_eq!(*s.get(0, 1), all);
        assert_eq!(*s.get(1, 0), all);
        assert_eq!(*s.get(0, 0), ScalarSet::singleton(Fe::ONE));
        let g = group_closure(&f, 2, &[Matrix::transvection(&f, 2, 0, 1, Fe::ONE).unwrap()], DEFAULT_CAP).unwrap();
        let s = transvection_sets(&g);
        assert_eq!(*s.get(0, 1), all);
        assert!(s.get(1, 0).is_zero());

        let pat = parse_pattern(ORDER10).unwrap();
        let z = pat.field().z().unwrap();
        let g = enumerate_sparsity_group(&pat, DEFAULT_CAP).unwrap();
        let s = transvection_sets(&g);
        assert_eq!(*s.get(0, 1), ScalarSet::new([Fe::ZERO, z]).unwrap());
        assert_eq!(*s.get(1, 0), all);
        assert!(s.transitivity_holds(pat.field()));
    }

    #[test]
    fn rescaling_examples() {
        let pat = parse_pattern(ORDER10).unwrap();
        let f = pat.field().clone();
        let z = f.z().unwrap();
        let g = enumerate_sparsity_group(&pat, DEFAULT_CAP).unwrap();
        let blocks = block_decomposition(&pat);
        let (d, g2) = rescale_basis(&g, &blocks).unwrap();
        assert_eq!(d, Matrix::diag(&f, &[Fe::ONE, f.inv(z).unwrap()]));
        let s = transvection_sets(&g2);
        assert_eq!(*s.get(0, 1), ScalarSet::new([Fe::ZERO, Fe::ONE]).unwrap());
        assert_eq!(*s.get(1, 0), ScalarSet::new([Fe::ZERO, z]).unwrap());
        assert_eq!(g2.order(), 10);

        let pat = parse_pattern(&full(2)).unwrap();
        let g = enumerate_sparsity_group(&pat, DEFAULT_CAP).unwrap();
        let (d, g2) = rescale_basis(&g, &block_decomposition(&pat)).unwrap();
        assert!(d.is_identity());
        assert_eq!(transvection_sets(&g2), transvection_sets(&g));
    }

    #[test]
    fn report_full_three() {
        let r = structure_report(&parse_pattern(&full(3)).unwrap(), DEFAULT_CAP).unwrap();
        assert_eq!(r.t(), 1);
        assert_eq!(r.k[0][0].len(), 2);
        assert_eq!(r.block_types, vec![BlockType::DetLevel { q: 2, m: 1 }]);
        assert_eq!(r.order, 168);
        assert_eq!(r.predicted_order, Some(168));
        assert_eq!(r.irreducible, Some(true));
    }

    #[test]
    fn report_parabolic() {
        let r = structure_report(&parse_pattern(PARABOLIC).unwrap(), DEFAULT_CAP).unwrap();
        assert_eq!(r.sizes(), vec![1, 2]);
        assert_eq!(r.block_types, vec![BlockType::Trivial, BlockType::DetLevel { q: 2, m: 1 }]);
        assert_eq!(r.k[0][1].len(), 2);
        assert_eq!(r.predicted_order, Some(24));
        assert_eq!(r.order, 24);
        assert!(r.assertions.values().all(|&b| b));
        assert_eq!(r.irreducible, Some(false));
        let json = r.to_json();
        assert_eq!(json["classes"], json!([[1], [2, 3]]));
        assert_eq!(json["assertions"]["d"], "pass");
    }

    #[test]
    fn report_order10() {
        let r = structure_report(&parse_pattern(ORDER10).unwrap(), DEFAULT_CAP).unwrap();
        assert_eq!(r.t(), 1);
        assert_eq!(r.block_types, vec![BlockType::TwoByTwo]);
        assert_eq!(r.order, 10);
        assert_eq!(r.k[0][0].len(), 4);
        let by_q: BTreeMap<u64, &SubfieldComparison> = r.exceptional.iter().map(|e| (e.q, e)).collect();
        assert_eq!(by_q[&2].gl_order, 6);
        assert!(!by_q[&2].compatible);
        assert_eq!(by_q[&4].sl_order, 60);
        assert!(!by_q[&4].compatible);
        assert_eq!(r.irreducible, Some(true));
    }

    #[test]
    fn change_of_basis_conjugates_original_group() {
        let text = "field GF(2^2) mod z^2+z+1\nn 3\nsigma 3 1 : {z}\nsigma 3 2 : full\nsigma 2 3 : {1}\n";
        let pat = parse_pattern(text).unwrap();
        let r = structure_report(&pat, DEFAULT_CAP).unwrap();
        let g = enumerate_sparsity_group(&pat, DEFAULT_CAP).unwrap();
        let conj = g.conjugate(&r.change_of_basis).unwrap();
        assert_eq!(conj.order(), r.group.order());
        assert!(conj.elements().iter().all(|m| r.group.contains(m)));
    }
}
