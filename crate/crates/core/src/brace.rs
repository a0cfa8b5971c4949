//! Finite left braces as pairs of Cayley tables on a shared carrier
//! `{0, ..., n-1}` with the identity at index 0, plus the structural toolbox:
//! verification with witnesses, lambda maps, subset classification,
//! automorphism groups, quotients, Sylow left ideals, a small enumerator and
//! the Yang-Baxter solution checker.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A single violated brace axiom together with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BraceViolation {
    NotSquare,
    EntryOutOfRange { table: &'static str, row: usize, col: usize },
    AddIdentityNotZero,
    AddNotCommutative { a: usize, b: usize },
    AddNotAssociative { a: usize, b: usize, c: usize },
    AddMissingInverse { a: usize },
    CircIdentityNotZero,
    CircNotAssociative { a: usize, b: usize, c: usize },
    CircMissingInverse { a: usize },
    CircRowNotBijective { a: usize },
    Compatibility { a: usize, b: usize, c: usize },
}

impl fmt::Display for BraceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BraceViolation::NotSquare => write!(f, "tables are not square of equal size"),
            BraceViolation::EntryOutOfRange { table, row, col } => {
                write!(f, "{table} entry at ({row}, {col}) is out of range")
            }
            BraceViolation::AddIdentityNotZero => write!(f, "additive identity is not index 0"),
            BraceViolation::AddNotCommutative { a, b } => {
                write!(f, "addition is not commutative at ({a}, {b})")
            }
            BraceViolation::AddNotAssociative { a, b, c } => {
                write!(f, "addition is not associative at ({a}, {b}, {c})")
            }
            BraceViolation::AddMissingInverse { a } => {
                write!(f, "element {a} has no additive inverse")
            }
            BraceViolation::CircIdentityNotZero => {
                write!(f, "multiplicative identity is not index 0")
            }
            BraceViolation::CircNotAssociative { a, b, c } => {
                write!(f, "circle operation is not associative at ({a}, {b}, {c})")
            }
            BraceViolation::CircMissingInverse { a } => {
                write!(f, "element {a} has no circle inverse")
            }
            BraceViolation::CircRowNotBijective { a } => {
                write!(f, "circle row {a} is not a bijection")
            }
            BraceViolation::Compatibility { a, b, c } => {
                write!(f, "compatibility a o (b + c) + a = a o b + a o c fails at ({a}, {b}, {c})")
            }
        }
    }
}

/// Outcome of `verify_brace`: every failed axiom with a witnessing tuple.
#[derive(Debug, Clone, Default)]
pub struct BraceReport {
    pub violations: Vec<BraceViolation>,
}

impl BraceReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for BraceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            write!(f, "valid left brace")
        } else {
            for (i, v) in self.violations.iter().enumerate() {
                if i > 0 {
                    writeln!(f)?;
                }
                write!(f, "{v}")?;
            }
            Ok(())
        }
    }
}

/// Checks the brace axioms on a pair of square tables, reporting every
/// failure with a witness instead of stopping at the first.
pub fn verify_brace(add: &[Vec<usize>], circ: &[Vec<usize>]) -> BraceReport {
    let mut report = BraceReport::default();
    let n = add.len();
    if n == 0
        || circ.len() != n
        || add.iter().any(|r| r.len() != n)
        || circ.iter().any(|r| r.len() != n)
    {
        report.violations.push(BraceViolation::NotSquare);
        return report;
    }
    for (name, table) in [("add", add), ("circ", circ)] {
        for (i, row) in table.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                if e >= n {
                    report
                        .violations
                        .push(BraceViolation::EntryOutOfRange { table: name, row: i, col: j });
                }
            }
        }
    }
    if !report.violations.is_empty() {
        return report;
    }

    if (0..n).any(|i| add[0][i] != i || add[i][0] != i) {
        report.violations.push(BraceViolation::AddIdentityNotZero);
    }
    'comm: for a in 0..n {
        for b in 0..n {
            if add[a][b] != add[b][a] {
                report.violations.push(BraceViolation::AddNotCommutative { a, b });
                break 'comm;
            }
        }
    }
    'add_assoc: for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if add[add[a][b]][c] != add[a][add[b][c]] {
                    report.violations.push(BraceViolation::AddNotAssociative { a, b, c });
                    break 'add_assoc;
                }
            }
        }
    }
    for a in 0..n {
        if !add[a].contains(&0) {
            report.violations.push(BraceViolation::AddMissingInverse { a });
        }
    }

    if (0..n).any(|i| circ[0][i] != i || circ[i][0] != i) {
        report.violations.push(BraceViolation::CircIdentityNotZero);
    }
    'circ_assoc: for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if circ[circ[a][b]][c] != circ[a][circ[b][c]] {
                    report.violations.push(BraceViolation::CircNotAssociative { a, b, c });
                    break 'circ_assoc;
                }
            }
        }
    }
    for a in 0..n {
        let mut seen = vec![false; n];
        for &e in &circ[a] {
            seen[e] = true;
        }
        if seen.iter().any(|&s| !s) {
            report.violations.push(BraceViolation::CircRowNotBijective { a });
        }
        if !circ[a].contains(&0) || !(0..n).any(|b| circ[a][b] == 0 && circ[b][a] == 0) {
            report.violations.push(BraceViolation::CircMissingInverse { a });
        }
    }

    if report.violations.is_empty() {
        'compat: for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let lhs = add[circ[a][add[b][c]]][a];
                    let rhs = add[circ[a][b]][circ[a][c]];
                    if lhs != rhs {
                        report.violations.push(BraceViolation::Compatibility { a, b, c });
                        break 'compat;
                    }
                }
            }
        }
    }
    report
}

/// Re-indexes a pair of tables so the (shared) identity lands at index 0.
/// Returns the relabeled tables and the permutation applied (new = perm[old]).
pub fn normalize_tables(
    add: &[Vec<usize>],
    circ: &[Vec<usize>],
) -> Result<(Vec<Vec<usize>>, Vec<Vec<usize>>, Vec<usize>)> {
    let n = add.len();
    let e = (0..n)
        .find(|&e| (0..n).all(|x| add[e][x] == x && add[x][e] == x))
        .ok_or_else(|| Error::NotAGroup("no additive identity".into()))?;
    let mut perm: Vec<usize> = (0..n).collect();
    perm.swap(0, e);
    let relabel = |t: &[Vec<usize>]| -> Vec<Vec<usize>> {
        let mut out = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                out[perm[a]][perm[b]] = perm[t[a][b]];
            }
        }
        out
    };
    Ok((relabel(add), relabel(circ), perm))
}

/// A finite left brace. Immutable after construction; construction validates
/// every axiom.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteBrace {
    order: usize,
    add: Vec<usize>,
    circ: Vec<usize>,
    name: Option<String>,
}

impl fmt::Debug for FiniteBrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteBrace(order {}", self.order)?;
        if let Some(name) = &self.name {
            write!(f, ", {name}")?;
        }
        write!(f, ")")
    }
}

impl FiniteBrace {
    pub fn new(
        add: Vec<Vec<usize>>,
        circ: Vec<Vec<usize>>,
        name: Option<String>,
    ) -> Result<Self> {
        let report = verify_brace(&add, &circ);
        if !report.is_valid() {
            return Err(Error::InvalidBrace(report.to_string()));
        }
        let order = add.len();
        Ok(FiniteBrace {
            order,
            add: add.into_iter().flatten().collect(),
            circ: circ.into_iter().flatten().collect(),
            name,
        })
    }

    /// The trivial brace on an abelian group table: both operations coincide.
    pub fn trivial(table: Vec<Vec<usize>>, name: Option<String>) -> Result<Self> {
        FiniteBrace::new(table.clone(), table, name)
    }

    /// The trivial brace on Z/n.
    pub fn trivial_cyclic(n: usize) -> Self {
        let table: Vec<Vec<usize>> =
            (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteBrace::trivial(table, Some(format!("Z{n}"))).expect("cyclic table is a brace")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.order + b]
    }

    pub fn circ(&self, a: usize, b: usize) -> usize {
        self.circ[a * self.order + b]
    }

    pub fn neg(&self, a: usize) -> usize {
        (0..self.order).find(|&b| self.add(a, b) == 0).expect("validated group")
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn circ_inv(&self, a: usize) -> usize {
        (0..self.order).find(|&b| self.circ(a, b) == 0).expect("validated group")
    }

    pub fn add_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| (0..self.order).map(|b| self.add(a, b)).collect()).collect()
    }

    pub fn circ_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| (0..self.order).map(|b| self.circ(a, b)).collect()).collect()
    }

    pub fn additive_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.add(x, a);
            k += 1;
        }
        k
    }

    pub fn circ_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.circ(x, a);
            k += 1;
        }
        k
    }

    /// Is the brace trivial (the two operations coincide)?
    pub fn is_trivial(&self) -> bool {
        self.add == self.circ
    }

    /// The lambda map `b -> a o b - a`, an automorphism of the additive group.
    pub fn lambda(&self, a: usize) -> Result<Vec<usize>> {
        if a >= self.order {
            return Err(Error::IndexOutOfRange(a, self.order));
        }
        Ok((0..self.order).map(|b| self.sub(self.circ(a, b), a)).collect())
    }

    pub fn lambda_inv(&self, a: usize) -> Result<Vec<usize>> {
        let l = self.lambda(a)?;
        let mut inv = vec![0; self.order];
        for (b, &img) in l.iter().enumerate() {
            inv[img] = b;
        }
        Ok(inv)
    }

    /// Classifies a subset: subbrace / left ideal / ideal / central ideal,
    /// each decided by exhaustive check.
    pub fn classify_subset(self: &Arc<Self>, elements: &[usize]) -> BraceSubset {
        let mut set = vec![false; self.order];
        let mut elems: Vec<usize> = Vec::new();
        for &x in elements {
            if x < self.order && !set[x] {
                set[x] = true;
                elems.push(x);
            }
        }
        elems.sort_unstable();
        let nonempty = !elems.is_empty();
        let closed = nonempty
            && elems.iter().all(|&a| {
                elems.iter().all(|&b| set[self.add(a, b)] && set[self.circ(a, b)])
            });
        let is_subbrace = closed;
        let is_left_ideal = is_subbrace
            && (0..self.order).all(|a| {
                let l = self.lambda(a).expect("index in range");
                elems.iter().all(|&y| set[l[y]])
            });
        let is_ideal = is_left_ideal
            && (0..self.order).all(|a| {
                let ai = self.circ_inv(a);
                elems.iter().all(|&y| set[self.circ(self.circ(a, y), ai)])
            });
        let is_central = is_ideal
            && (0..self.order).all(|a| {
                elems.iter().all(|&y| {
                    self.circ(y, a) == self.add(a, y) && self.circ(a, y) == self.add(a, y)
                })
            });
        BraceSubset {
            ambient: Arc::clone(self),
            elements: elems,
            is_subbrace,
            is_left_ideal,
            is_ideal,
            is_central,
        }
    }

    /// All brace automorphisms, as a group under composition. The exhaustive
    /// search is bounded; `max_order` defaults to [`AUT_SEARCH_BOUND`].
    pub fn automorphisms(self: &Arc<Self>, max_order: Option<usize>) -> Result<Vec<BraceMorphism>> {
        let bound = max_order.unwrap_or(AUT_SEARCH_BOUND);
        if self.order > bound {
            return Err(Error::OrderTooLarge(self.order, bound));
        }
        let add = self.add_rows();
        let circ = self.circ_rows();
        let perms = table_automorphisms(&[&add, &circ]);
        perms
            .into_iter()
            .map(|p| BraceMorphism::new(Arc::clone(self), Arc::clone(self), p))
            .collect()
    }

    /// Quotient by an ideal, with the canonical projection. Coset indices are
    /// ordered by minimal representative, so the zero coset is index 0.
    pub fn quotient(self: &Arc<Self>, ideal: &BraceSubset) -> Result<(Arc<FiniteBrace>, BraceMorphism)> {
        if !ideal.is_ideal {
            return Err(Error::NotAnIdeal(format!("subset {:?}", ideal.elements)));
        }
        let n = self.order;
        let mut coset_of = vec![usize::MAX; n];
        let mut reps: Vec<usize> = Vec::new();
        for x in 0..n {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(x);
            for &y in &ideal.elements {
                coset_of[self.add(x, y)] = c;
            }
        }
        let m = reps.len();
        let mut add = vec![vec![0usize; m]; m];
        let mut circ = vec![vec![0usize; m]; m];
        for a in 0..m {
            for b in 0..m {
                add[a][b] = coset_of[self.add(reps[a], reps[b])];
                circ[a][b] = coset_of[self.circ(reps[a], reps[b])];
            }
        }
        let h = Arc::new(FiniteBrace::new(add, circ, None)?);
        let proj = BraceMorphism::new(Arc::clone(self), Arc::clone(&h), coset_of)?;
        Ok((h, proj))
    }

    /// The Sylow left ideal at `p`: all elements of p-power additive order.
    pub fn sylow_left_ideal(self: &Arc<Self>, p: u64) -> Result<BraceSubset> {
        let n = self.order as u64;
        if p < 2 || n % p != 0 {
            return Err(Error::PrimeDoesNotDivideOrder(p, self.order));
        }
        let elems: Vec<usize> = (0..self.order)
            .filter(|&x| {
                let mut o = self.additive_order(x) as u64;
                while o % p == 0 {
                    o /= p;
                }
                o == 1
            })
            .collect();
        let subset = self.classify_subset(&elems);
        // Sylow size in (E, +); the same set is a Sylow subgroup of (E, o).
        let mut expected = 1u64;
        let mut m = n;
        while m % p == 0 {
            expected *= p;
            m /= p;
        }
        if subset.elements.len() as u64 != expected || !subset.is_left_ideal {
            return Err(Error::NotALeftIdeal(format!(
                "Sylow {p}-set of size {} failed verification",
                subset.elements.len()
            )));
        }
        Ok(subset)
    }

    /// The sub-brace on a closed subset, re-indexed onto `{0, ..., m-1}` in
    /// ascending carrier order, with the embedding back into the ambient.
    pub fn induced_subbrace(
        &self,
        elements: &[usize],
    ) -> Result<(FiniteBrace, Vec<usize>)> {
        let mut elems = elements.to_vec();
        elems.sort_unstable();
        elems.dedup();
        let pos = |x: usize| elems.binary_search(&x).ok();
        let m = elems.len();
        let mut add = vec![vec![0usize; m]; m];
        let mut circ = vec![vec![0usize; m]; m];
        for a in 0..m {
            for b in 0..m {
                add[a][b] = pos(self.add(elems[a], elems[b])).ok_or_else(|| {
                    Error::NotAnIdeal("subset not closed under addition".into())
                })?;
                circ[a][b] = pos(self.circ(elems[a], elems[b])).ok_or_else(|| {
                    Error::NotAnIdeal("subset not closed under circle".into())
                })?;
            }
        }
        Ok((FiniteBrace::new(add, circ, None)?, elems))
    }

    /// The set-theoretic Yang-Baxter solution derived from the brace.
    pub fn ybe_solution(&self) -> YbeSolution {
        let n = self.order;
        let mut map = Vec::with_capacity(n * n);
        for x in 0..n {
            let lx = self.lambda(x).expect("in range");
            for y in 0..n {
                let u = lx[y];
                // Second component: the circle-inverse of u composed with x o y.
                let v = self.circ(self.circ_inv(u), self.circ(x, y));
                map.push((u, v));
            }
        }
        YbeSolution { n, map, add: self.add_rows(), circ: self.circ_rows() }
    }
}

/// Default bound for exhaustive automorphism search.
pub const AUT_SEARCH_BOUND: usize = 16;

/// A subset of a brace together with its classification flags.
#[derive(Debug, Clone)]
pub struct BraceSubset {
    pub ambient: Arc<FiniteBrace>,
    pub elements: Vec<usize>,
    pub is_subbrace: bool,
    pub is_left_ideal: bool,
    pub is_ideal: bool,
    pub is_central: bool,
}

/// A brace homomorphism given by an index table; validated on construction.
#[derive(Debug, Clone)]
pub struct BraceMorphism {
    pub source: Arc<FiniteBrace>,
    pub target: Arc<FiniteBrace>,
    pub map: Vec<usize>,
}

impl PartialEq for BraceMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map
            && self.source.as_ref() == other.source.as_ref()
            && self.target.as_ref() == other.target.as_ref()
    }
}
impl Eq for BraceMorphism {}

impl BraceMorphism {
    pub fn new(
        source: Arc<FiniteBrace>,
        target: Arc<FiniteBrace>,
        map: Vec<usize>,
    ) -> Result<Self> {
        if map.len() != source.order() {
            return Err(Error::DimensionMismatch("morphism table length".into()));
        }
        if map.iter().any(|&x| x >= target.order()) {
            return Err(Error::NotAnAutomorphism("image out of range".into()));
        }
        if map[0] != 0 {
            return Err(Error::NotAnAutomorphism("identity is not fixed".into()));
        }
        for a in 0..source.order() {
            for b in 0..source.order() {
                if map[source.add(a, b)] != target.add(map[a], map[b])
                    || map[source.circ(a, b)] != target.circ(map[a], map[b])
                {
                    return Err(Error::NotAnAutomorphism(format!(
                        "not a brace homomorphism at ({a}, {b})"
                    )));
                }
            }
        }
        Ok(BraceMorphism { source, target, map })
    }

    pub fn identity(brace: &Arc<FiniteBrace>) -> Self {
        BraceMorphism {
            source: Arc::clone(brace),
            target: Arc::clone(brace),
            map: (0..brace.order()).collect(),
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.target.order()];
        for &x in &self.map {
            if seen[x] {
                return false;
            }
            seen[x] = true;
        }
        self.source.order() == self.target.order()
    }

    pub fn is_automorphism(&self) -> bool {
        self.source.as_ref() == self.target.as_ref() && self.is_bijective()
    }

    /// self after other: (self . other)(x) = self(other(x)).
    pub fn compose(&self, other: &BraceMorphism) -> Result<BraceMorphism> {
        if other.target.as_ref() != self.source.as_ref() {
            return Err(Error::DimensionMismatch("composition chain mismatch".into()));
        }
        let map = other.map.iter().map(|&x| self.map[x]).collect();
        Ok(BraceMorphism {
            source: Arc::clone(&other.source),
            target: Arc::clone(&self.target),
            map,
        })
    }

    pub fn inverse(&self) -> Result<BraceMorphism> {
        if !self.is_bijective() {
            return Err(Error::NotAnAutomorphism("not bijective".into()));
        }
        let mut inv = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = x;
        }
        Ok(BraceMorphism {
            source: Arc::clone(&self.target),
            target: Arc::clone(&self.source),
            map: inv,
        })
    }

    /// Elements mapping to 0; always an ideal of the source.
    pub fn kernel(&self) -> Vec<usize> {
        (0..self.source.order()).filter(|&x| self.map[x] == 0).collect()
    }
}

/// All permutations of the carrier fixing 0 that preserve every listed table.
/// Backtracking with forced-closure propagation; candidates are pruned by the
/// per-table order profile before anything else is tried.
pub fn table_automorphisms(tables: &[&Vec<Vec<usize>>]) -> Vec<Vec<usize>> {
    let n = tables.first().map_or(0, |t| t.len());
    if n == 0 {
        return vec![];
    }
    let order_in = |t: &Vec<Vec<usize>>, x: usize| -> usize {
        let mut v = x;
        let mut k = 1;
        while v != 0 {
            v = t[v][x];
            k += 1;
        }
        k
    };
    let profile: Vec<Vec<usize>> =
        (0..n).map(|x| tables.iter().map(|t| order_in(t, x)).collect()).collect();

    struct Search<'a> {
        tables: &'a [&'a Vec<Vec<usize>>],
        profile: Vec<Vec<usize>>,
        n: usize,
        found: Vec<Vec<usize>>,
    }

    impl Search<'_> {
        /// Assign f(x) = y and propagate all forced images; false on conflict.
        fn assign(&self, f: &mut Vec<Option<usize>>, used: &mut Vec<bool>, x: usize, y: usize) -> bool {
            if self.profile[x] != self.profile[y] {
                return false;
            }
            match f[x] {
                Some(cur) => return cur == y,
                None => {
                    if used[y] {
                        return false;
                    }
                    f[x] = Some(y);
                    used[y] = true;
                }
            }
            let assigned: Vec<usize> = (0..self.n).filter(|&a| f[a].is_some()).collect();
            for &a in &assigned {
                let fa = f[a].unwrap();
                for t in self.tables {
                    let pairs = [(t[a][x], t[fa][y]), (t[x][a], t[y][fa])];
                    for (src, dst) in pairs {
                        match f[src] {
                            Some(cur) if cur != dst => return false,
                            Some(_) => {}
                            None => {
                                if !self.assign(f, used, src, dst) {
                                    return false;
                                }
                            }
                        }
                    }
                }
            }
            true
        }

        fn go(&mut self, f: &Vec<Option<usize>>, used: &Vec<bool>) {
            let Some(x) = (0..self.n).find(|&x| f[x].is_none()) else {
                self.found.push(f.iter().map(|v| v.unwrap()).collect());
                return;
            };
            for y in 0..self.n {
                if used[y] || self.profile[x] != self.profile[y] {
                    continue;
                }
                let mut f2 = f.clone();
                let mut used2 = used.clone();
                if self.assign(&mut f2, &mut used2, x, y) {
                    self.go(&f2, &used2);
                }
            }
        }
    }

    let mut search = Search { tables, profile, n, found: Vec::new() };
    let mut f = vec![None; n];
    let mut used = vec![false; n];
    assert!(search.assign(&mut f, &mut used, 0, 0));
    search.go(&f, &used);
    search.found.sort();
    search.found
}

/// Lexicographically minimal relabeling (identity pinned at 0) of the pair of
/// tables; braces are isomorphic exactly when their canonical forms agree.
pub fn canonical_form(add: &[Vec<usize>], circ: &[Vec<usize>]) -> Vec<usize> {
    let n = add.len();
    let mut best: Option<Vec<usize>> = None;
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let mut flat = Vec::with_capacity(2 * n * n);
        for t in [add, circ] {
            let mut relabeled = vec![0usize; n * n];
            for a in 0..n {
                for b in 0..n {
                    relabeled[perm[a] * n + perm[b]] = perm[t[a][b]];
                }
            }
            flat.extend(relabeled);
        }
        if best.as_ref().is_none_or(|b| flat < *b) {
            best = Some(flat);
        }
        // Next permutation of positions 1..n (0 stays fixed).
        if !next_permutation(&mut perm[1..]) {
            break;
        }
    }
    best.unwrap_or_default()
}

fn next_permutation(arr: &mut [usize]) -> bool {
    let n = arr.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && arr[i - 1] >= arr[i] {
        i -= 1;
    }
    if i == 0 {
        arr.sort_unstable();
        return false;
    }
    let mut j = n - 1;
    while arr[j] <= arr[i - 1] {
        j -= 1;
    }
    arr.swap(i - 1, j);
    arr[i..].reverse();
    true
}

/// Default bound for the brace enumerator.
pub const ENUMERATE_BOUND: usize = 6;

fn factor_chains(n: usize) -> Vec<Vec<u64>> {
    // All chains d1 | d2 | ... | dk with product n, di >= 2 (invariant factors).
    fn go(n: u64, min: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if n == 1 {
            if acc.iter().skip(1).zip(acc.iter()).all(|(b, a)| b % a == 0) {
                out.push(acc.clone());
            }
            return;
        }
        let mut d = min;
        while d <= n {
            if n % d == 0 {
                acc.push(d);
                go(n / d, d, acc, out);
                acc.pop();
            }
            d += 1;
        }
    }
    if n == 1 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut acc = Vec::new();
    go(n as u64, 2, &mut acc, &mut out);
    // Keep only genuine invariant-factor chains.
    out.retain(|c| c.windows(2).all(|w| w[1] % w[0] == 0));
    out.sort();
    out.dedup();
    out
}

/// Every left brace of order `n`, one per isomorphism class, each passing
/// `verify_brace`. The multiplicative structure is searched through lambda
/// maps over each abelian group of order `n` in canonical coordinates.
pub fn enumerate_braces(n: usize, max_order: Option<usize>) -> Result<Vec<FiniteBrace>> {
    let bound = max_order.unwrap_or(ENUMERATE_BOUND);
    if n == 0 {
        return Err(Error::DimensionMismatch("brace order must be >= 1".into()));
    }
    if n > bound {
        return Err(Error::OrderTooLarge(n, bound));
    }
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for chain in factor_chains(n) {
        let group = crate::abelian::FgAbelianGroup::from_u64(&chain)?;
        let add = group.addition_table();
        let auts = table_automorphisms(&[&add]);
        let a = auts.len();
        let candidates = (a as u128).checked_pow((n - 1) as u32);
        if candidates.is_none() || candidates.unwrap() > 100_000_000 {
            return Err(Error::OrderTooLarge(n, bound));
        }
        // lambda[0] is the identity; vary lambda over Aut(A, +) elsewhere.
        let mut choice = vec![0usize; n];
        loop {
            let lambda: Vec<&Vec<usize>> = (0..n).map(|x| &auts[choice[x]]).collect();
            let mut ok = lambda[0].iter().enumerate().all(|(i, &v)| v == i);
            if ok {
                'law: for x in 0..n {
                    for b in 0..n {
                        // lambda_{x + lambda_x(b)} = lambda_x . lambda_b
                        let idx = add[x][lambda[x][b]];
                        for c in 0..n {
                            if lambda[idx][c] != lambda[x][lambda[b][c]] {
                                ok = false;
                                break 'law;
                            }
                        }
                    }
                }
            }
            if ok {
                let circ: Vec<Vec<usize>> =
                    (0..n).map(|x| (0..n).map(|b| add[x][lambda[x][b]]).collect()).collect();
                let form = canonical_form(&add, &circ);
                if seen.insert(form) {
                    let brace = FiniteBrace::new(add.clone(), circ, None)?;
                    out.push(brace);
                }
            }
            // Odometer over lambda choices (position 0 pinned to identity).
            let mut pos = n - 1;
            loop {
                if pos == 0 {
                    choice = vec![usize::MAX; n];
                    break;
                }
                choice[pos] += 1;
                if choice[pos] < a {
                    break;
                }
                choice[pos] = 0;
                pos -= 1;
            }
            if choice[0] == usize::MAX {
                break;
            }
        }
    }
    // Deterministic order: by canonical form of the tables.
    out.sort_by_key(|b| canonical_form(&b.add_rows(), &b.circ_rows()));
    let out = out
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.with_name(&format!("B{n}.{}", i + 1)))
        .collect();
    Ok(out)
}

/// The derived set-theoretic solution `r(x, y)` together with its checker.
#[derive(Debug, Clone)]
pub struct YbeSolution {
    pub n: usize,
    map: Vec<(usize, usize)>,
    add: Vec<Vec<usize>>,
    circ: Vec<Vec<usize>>,
}

/// Checker outcome; `None` in a field means that property holds.
#[derive(Debug, Clone, Default)]
pub struct YbeReport {
    pub braid_failure: Option<(usize, usize, usize)>,
    pub involutivity_failure: Option<(usize, usize)>,
    pub nondegeneracy_failure: Option<(usize, usize)>,
}

impl YbeReport {
    pub fn passes(&self) -> bool {
        self.braid_failure.is_none()
            && self.involutivity_failure.is_none()
            && self.nondegeneracy_failure.is_none()
    }
}

impl YbeSolution {
    pub fn r(&self, x: usize, y: usize) -> (usize, usize) {
        self.map[x * self.n + y]
    }

    /// Verifies the braid relation on E^3, involutivity on E^2 and
    /// non-degeneracy of both coordinate maps.
    pub fn check(&self) -> YbeReport {
        let n = self.n;
        let mut report = YbeReport::default();
        let r12 = |(x, y, z): (usize, usize, usize)| {
            let (a, b) = self.r(x, y);
            (a, b, z)
        };
        let r23 = |(x, y, z): (usize, usize, usize)| {
            let (b, c) = self.r(y, z);
            (x, b, c)
        };
        'braid: for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let lhs = r12(r23(r12((x, y, z))));
                    let rhs = r23(r12(r23((x, y, z))));
                    if lhs != rhs {
                        report.braid_failure = Some((x, y, z));
                        break 'braid;
                    }
                }
            }
        }
        'inv: for x in 0..n {
            for y in 0..n {
                let (a, b) = self.r(x, y);
                if self.r(a, b) != (x, y) {
                    report.involutivity_failure = Some((x, y));
                    break 'inv;
                }
            }
        }
        // Non-degeneracy: y -> r(x, y).0 bijective for fixed x, and
        // x -> r(x, y).1 bijective for fixed y.
        for x in 0..n {
            let mut seen = vec![false; n];
            for y in 0..n {
                let (a, _) = self.r(x, y);
                if seen[a] {
                    report.nondegeneracy_failure = Some((x, y));
                }
                seen[a] = true;
            }
        }
        for y in 0..n {
            let mut seen = vec![false; n];
            for x in 0..n {
                let (_, b) = self.r(x, y);
                if seen[b] {
                    report.nondegeneracy_failure = Some((x, y));
                }
                seen[b] = true;
            }
        }
        let _ = (&self.add, &self.circ);
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xor_table(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|a| (0..n).map(|b| a ^ b).collect()).collect()
    }

    fn cyclic_table(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
    }

    #[test]
    fn z2_trivial_is_valid() {
        let t = xor_table(2);
        let report = verify_brace(&t, &t);
        assert!(report.is_valid());
        let b = FiniteBrace::trivial(t, None).unwrap();
        assert!(b.is_trivial());
    }

    #[test]
    fn z4_add_with_xor_circ_is_a_brace() {
        // The exhaustive axiom scan certifies this mixed pair: XOR is a group
        // operation compatible with cyclic addition on four points.
        let report = verify_brace(&cyclic_table(4), &xor_table(4));
        assert!(report.is_valid(), "{report}");
    }

    #[test]
    fn relabeled_circ_breaks_compatibility_with_witness() {
        // Z/4 addition with a circle operation conjugated by the transposition
        // (2 3): both groups share the identity but compatibility fails.
        let sigma = [0usize, 1, 3, 2];
        let circ: Vec<Vec<usize>> =
            (0..4).map(|a| (0..4).map(|b| sigma[(sigma[a] + sigma[b]) % 4]).collect()).collect();
        let report = verify_brace(&cyclic_table(4), &circ);
        assert!(!report.is_valid());
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, BraceViolation::Compatibility { .. })));
    }

    #[test]
    fn shifted_identity_is_reported() {
        let mut shifted = xor_table(4);
        // Swap labels 0 and 1 so the circ identity moves to index 1.
        for row in &mut shifted {
            for e in row.iter_mut() {
                *e ^= 1;
            }
        }
        shifted.swap(0, 1);
        let report = verify_brace(&cyclic_table(4), &shifted);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, BraceViolation::CircIdentityNotZero)));
    }

    #[test]
    fn normalize_tables_moves_identity_home() {
        let mut shifted = xor_table(4);
        for row in &mut shifted {
            for e in row.iter_mut() {
                *e ^= 1;
            }
        }
        shifted.swap(0, 1);
        let (add, circ, _) = normalize_tables(&shifted, &shifted).unwrap();
        assert!(verify_brace(&add, &circ).is_valid());
    }

    #[test]
    fn lambda_is_identity_on_trivial_braces() {
        let b = FiniteBrace::trivial_cyclic(5);
        for a in 0..5 {
            assert_eq!(b.lambda(a).unwrap(), (0..5).collect::<Vec<_>>());
        }
        assert!(matches!(b.lambda(7), Err(Error::IndexOutOfRange(7, 5))));
    }

    #[test]
    fn lambda_zero_is_identity_always() {
        for b in enumerate_braces(4, None).unwrap() {
            assert_eq!(b.lambda(0).unwrap(), (0..4).collect::<Vec<_>>());
        }
    }

    #[test]
    fn lambda_is_a_circ_homomorphism() {
        for b in enumerate_braces(4, None).unwrap() {
            for a in 0..4 {
                let la = b.lambda(a).unwrap();
                for c in 0..4 {
                    let lc = b.lambda(c).unwrap();
                    let lac = b.lambda(b.circ(a, c)).unwrap();
                    let composed: Vec<usize> = (0..4).map(|x| la[lc[x]]).collect();
                    assert_eq!(lac, composed);
                }
                // a + b = a o lambda_a^{-1}(b) and a o b = a + lambda_a(b)
                let lainv = b.lambda_inv(a).unwrap();
                for x in 0..4 {
                    assert_eq!(b.add(a, x), b.circ(a, lainv[x]));
                    assert_eq!(b.circ(a, x), b.add(a, la[x]));
                }
            }
        }
    }

    #[test]
    fn subset_classification_extremes() {
        let b = Arc::new(FiniteBrace::trivial_cyclic(6));
        let zero = b.classify_subset(&[0]);
        assert!(zero.is_central && zero.is_ideal);
        let all = b.classify_subset(&(0..6).collect::<Vec<_>>());
        assert!(all.is_ideal);
    }

    #[test]
    fn automorphisms_of_small_trivial_braces() {
        let z2 = Arc::new(FiniteBrace::trivial_cyclic(2));
        assert_eq!(z2.automorphisms(None).unwrap().len(), 1);

        let z4 = Arc::new(FiniteBrace::trivial_cyclic(4));
        assert_eq!(z4.automorphisms(None).unwrap().len(), 2);

        let k4 = Arc::new(FiniteBrace::trivial(xor_table(4), None).unwrap());
        let auts = k4.automorphisms(None).unwrap();
        assert_eq!(auts.len(), 6);
        // Closed under composition and inverse, contains the identity.
        let id = BraceMorphism::identity(&k4);
        assert!(auts.contains(&id));
        for f in &auts {
            assert!(auts.contains(&f.inverse().unwrap()));
            for g in &auts {
                assert!(auts.contains(&f.compose(g).unwrap()));
            }
        }
    }

    #[test]
    fn automorphism_bound_is_enforced() {
        let b = Arc::new(FiniteBrace::trivial_cyclic(6));
        assert!(matches!(b.automorphisms(Some(4)), Err(Error::OrderTooLarge(6, 4))));
    }

    #[test]
    fn quotient_extremes() {
        let b = Arc::new(FiniteBrace::trivial_cyclic(6));
        let whole = b.classify_subset(&(0..6).collect::<Vec<_>>());
        let (q, _) = b.quotient(&whole).unwrap();
        assert_eq!(q.order(), 1);
        let zero = b.classify_subset(&[0]);
        let (q, proj) = b.quotient(&zero).unwrap();
        assert_eq!(q.order(), 6);
        assert_eq!(proj.kernel(), vec![0]);
        let not_ideal = b.classify_subset(&[0, 1]);
        assert!(b.quotient(&not_ideal).is_err());
    }

    #[test]
    fn sylow_left_ideals_of_z6() {
        let b = Arc::new(FiniteBrace::trivial_cyclic(6));
        assert_eq!(b.sylow_left_ideal(2).unwrap().elements, vec![0, 3]);
        assert_eq!(b.sylow_left_ideal(3).unwrap().elements, vec![0, 2, 4]);
        assert!(matches!(
            b.sylow_left_ideal(5),
            Err(Error::PrimeDoesNotDivideOrder(5, 6))
        ));
        let b5 = Arc::new(FiniteBrace::trivial_cyclic(5));
        assert_eq!(b5.sylow_left_ideal(5).unwrap().elements, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn enumerate_tiny_orders() {
        assert_eq!(enumerate_braces(1, None).unwrap().len(), 1);
        assert_eq!(enumerate_braces(2, None).unwrap().len(), 1);
        for b in enumerate_braces(4, None).unwrap() {
            assert!(verify_brace(&b.add_rows(), &b.circ_rows()).is_valid());
        }
        assert!(matches!(enumerate_braces(7, None), Err(Error::OrderTooLarge(7, 6))));
    }

    #[test]
    fn ybe_on_trivial_brace_is_the_flip() {
        let b = FiniteBrace::trivial_cyclic(4);
        let sol = b.ybe_solution();
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(sol.r(x, y), (y, x));
            }
        }
        assert!(sol.check().passes());
    }

    #[test]
    fn ybe_checker_passes_on_order_four_braces() {
        for b in enumerate_braces(4, None).unwrap() {
            assert!(b.ybe_solution().check().passes(), "{:?}", b.name());
        }
    }

    #[test]
    fn morphism_kernel_is_an_ideal() {
        for b in enumerate_braces(4, None).unwrap() {
            let b = Arc::new(b);
            for f in b.automorphisms(None).unwrap() {
                let k = f.kernel();
                assert!(b.classify_subset(&k).is_ideal);
            }
        }
    }
}
