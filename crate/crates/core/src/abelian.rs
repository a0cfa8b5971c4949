//! Finitely generated (here: finite) abelian groups in invariant-factor form,
//! homomorphisms between them, and the kernel/image/quotient machinery that
//! turns cochain conditions into exact group presentations.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{kernel_mod, smith_normal_form, solve_mod, IntMatrix};

/// A finite abelian group `Z/d1 x ... x Z/dk` with `d1 | d2 | ... | dk`,
/// each `di >= 2`. The trivial group is the empty factor list (never `[1]`).
/// Elements are coefficient vectors reduced mod the factors; the element
/// index enumerates them in lexicographic order (first coordinate most
/// significant).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FgAbelianGroup {
    factors: Vec<BigInt>,
}

impl FgAbelianGroup {
    pub fn new(factors: Vec<BigInt>) -> Result<Self> {
        for w in factors.windows(2) {
            if !(&w[1] % &w[0]).is_zero() {
                return Err(Error::DimensionMismatch(format!(
                    "invariant factors must form a divisibility chain: {} does not divide {}",
                    w[0], w[1]
                )));
            }
        }
        if factors.iter().any(|d| d < &BigInt::from(2)) {
            return Err(Error::DimensionMismatch(
                "invariant factors must all be >= 2 (trivial group is the empty list)".into(),
            ));
        }
        Ok(FgAbelianGroup { factors })
    }

    pub fn trivial() -> Self {
        FgAbelianGroup { factors: Vec::new() }
    }

    pub fn from_u64(factors: &[u64]) -> Result<Self> {
        FgAbelianGroup::new(factors.iter().map(|&d| BigInt::from(d)).collect())
    }

    pub fn cyclic(n: u64) -> Self {
        if n <= 1 {
            FgAbelianGroup::trivial()
        } else {
            FgAbelianGroup { factors: vec![BigInt::from(n)] }
        }
    }

    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> BigInt {
        self.factors.iter().product::<BigInt>().max(BigInt::one())
    }

    /// Number of elements as a machine integer; the library only works with
    /// desk-scale groups so this is expected to fit.
    pub fn size(&self) -> usize {
        self.order().to_usize().expect("group order exceeds machine range")
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.rank()]
    }

    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        v.iter()
            .zip(&self.factors)
            .map(|(x, d)| {
                let r = x % d;
                if r.is_negative() {
                    r + d
                } else {
                    r
                }
            })
            .collect()
    }

    pub fn add(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let sum: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.reduce(&sum)
    }

    pub fn neg(&self, a: &[BigInt]) -> Vec<BigInt> {
        let n: Vec<BigInt> = a.iter().map(|x| -x).collect();
        self.reduce(&n)
    }

    pub fn sub(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let d: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.reduce(&d)
    }

    pub fn element(&self, mut index: usize) -> Vec<BigInt> {
        let mut coords = vec![BigInt::zero(); self.rank()];
        for i in (0..self.rank()).rev() {
            let d = self.factors[i].to_usize().expect("factor exceeds machine range");
            coords[i] = BigInt::from(index % d);
            index /= d;
        }
        coords
    }

    pub fn index_of(&self, coords: &[BigInt]) -> usize {
        let reduced = self.reduce(coords);
        let mut index = 0usize;
        for (c, d) in reduced.iter().zip(&self.factors) {
            let d = d.to_usize().expect("factor exceeds machine range");
            index = index * d + c.to_usize().expect("reduced coordinate fits");
        }
        index
    }

    pub fn elements(&self) -> impl Iterator<Item = Vec<BigInt>> + '_ {
        (0..self.size()).map(|i| self.element(i))
    }

    pub fn add_index(&self, a: usize, b: usize) -> usize {
        self.index_of(&self.add(&self.element(a), &self.element(b)))
    }

    pub fn neg_index(&self, a: usize) -> usize {
        self.index_of(&self.neg(&self.element(a)))
    }

    /// The Cayley table of the canonical coordinate-wise addition.
    pub fn addition_table(&self) -> Vec<Vec<usize>> {
        let n = self.size();
        (0..n).map(|a| (0..n).map(|b| self.add_index(a, b)).collect()).collect()
    }
}

/// A homomorphism between finite abelian groups in coordinate form: the
/// matrix sends source coordinates to target coordinates.
#[derive(Debug, Clone)]
pub struct AbelianHom {
    pub source: FgAbelianGroup,
    pub target: FgAbelianGroup,
    pub matrix: IntMatrix,
}

impl AbelianHom {
    pub fn new(source: FgAbelianGroup, target: FgAbelianGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
            return Err(Error::DimensionMismatch(format!(
                "hom matrix {}x{} does not match target rank {} x source rank {}",
                matrix.rows(),
                matrix.cols(),
                target.rank(),
                source.rank()
            )));
        }
        // Well-definedness: annihilating each source relation d_j e_j in the target.
        for j in 0..source.rank() {
            for i in 0..target.rank() {
                let v = &source.factors()[j] * matrix.get(i, j);
                if !(&v % &target.factors()[i]).is_zero() {
                    return Err(Error::DimensionMismatch(format!(
                        "hom not well defined on generator {j}: coordinate {i}"
                    )));
                }
            }
        }
        Ok(AbelianHom { source, target, matrix })
    }

    pub fn zero(source: FgAbelianGroup, target: FgAbelianGroup) -> Self {
        let matrix = IntMatrix::zeros(target.rank(), source.rank());
        AbelianHom { source, target, matrix }
    }

    pub fn identity(group: FgAbelianGroup) -> Self {
        let matrix = IntMatrix::identity(group.rank());
        AbelianHom { source: group.clone(), target: group, matrix }
    }

    pub fn apply(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        Ok(self.target.reduce(&self.matrix.apply(v)?))
    }

    pub fn compose(&self, inner: &AbelianHom) -> Result<AbelianHom> {
        if inner.target != self.source {
            return Err(Error::DimensionMismatch("composition source/target mismatch".into()));
        }
        let matrix = self.matrix.mul(&inner.matrix)?;
        AbelianHom::new(inner.source.clone(), self.target.clone(), matrix)
    }
}

/// A subgroup of a finite abelian group, given by generators in ambient
/// coordinates together with its own invariant-factor structure and an
/// inclusion sending canonical structure generators to ambient vectors.
#[derive(Debug, Clone)]
pub struct Subgroup {
    pub ambient: FgAbelianGroup,
    pub gens: Vec<Vec<BigInt>>,
    pub structure: FgAbelianGroup,
    pub inclusion: AbelianHom,
}

impl Subgroup {
    /// Subgroup generated by `gens` inside `ambient`.
    pub fn generated(ambient: &FgAbelianGroup, gens: &[Vec<BigInt>]) -> Result<Subgroup> {
        let m = ambient.rank();
        for g in gens {
            if g.len() != m {
                return Err(Error::DimensionMismatch("subgroup generator length".into()));
            }
        }
        let gmat = IntMatrix::from_columns(
            &gens.iter().map(|g| ambient.reduce(g)).collect::<Vec<_>>(),
            m,
        )?;
        // Relations among the generators: x with G x = 0 in the ambient group.
        let rel = kernel_mod(&gmat, ambient.factors())?;
        let snf = smith_normal_form(&rel);
        let diag = snf.diagonal();
        let mut kept = Vec::new();
        for (i, d) in diag.iter().enumerate() {
            if d > &BigInt::one() {
                kept.push(i);
            }
        }
        debug_assert!(
            diag.len() == gens.len() && !diag.iter().any(Zero::is_zero),
            "subgroup of a finite group must have full-rank relations"
        );
        let structure = FgAbelianGroup::new(kept.iter().map(|&i| diag[i].clone()).collect())?;
        // Canonical generator i of the structure lifts to Uinv e_i in Z^t,
        // hence to G * (Uinv e_i) in ambient coordinates.
        let mut incl_cols = Vec::new();
        for &i in &kept {
            let lift = snf.uinv.column(i);
            incl_cols.push(ambient.reduce(&gmat.apply(&lift)?));
        }
        let inclusion = AbelianHom::new(
            structure.clone(),
            ambient.clone(),
            IntMatrix::from_columns(&incl_cols, m)?,
        )?;
        Ok(Subgroup { ambient: ambient.clone(), gens: gens.to_vec(), structure, inclusion })
    }

    pub fn order(&self) -> BigInt {
        self.structure.order()
    }

    /// Does `v` lie in the subgroup?
    pub fn contains(&self, v: &[BigInt]) -> Result<bool> {
        Ok(self.express(v)?.is_some())
    }

    /// Expresses `v` as a combination of the original generators, if possible.
    pub fn express(&self, v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        let m = self.ambient.rank();
        let gmat = IntMatrix::from_columns(
            &self.gens.iter().map(|g| self.ambient.reduce(g)).collect::<Vec<_>>(),
            m,
        )?;
        solve_mod(&gmat, self.ambient.factors(), &self.ambient.reduce(v))
    }

    /// All elements of the subgroup as ambient coordinate vectors.
    pub fn elements(&self) -> Result<Vec<Vec<BigInt>>> {
        let mut out = Vec::with_capacity(self.structure.size());
        for coords in self.structure.elements() {
            out.push(self.inclusion.apply(&coords)?);
        }
        Ok(out)
    }
}

/// A quotient of a finite abelian group by a subgroup, with the projection
/// onto canonical coordinates of the quotient.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub ambient: FgAbelianGroup,
    pub group: FgAbelianGroup,
    proj: IntMatrix,
}

impl Quotient {
    pub fn project(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        Ok(self.group.reduce(&self.proj.apply(v)?))
    }
}

/// Quotient of `ambient` by the subgroup generated by `gens`, in
/// invariant-factor form with an explicit surjective projection whose kernel
/// is exactly that subgroup.
pub fn quotient_invariants(ambient: &FgAbelianGroup, gens: &[Vec<BigInt>]) -> Result<Quotient> {
    let m = ambient.rank();
    for g in gens {
        if g.len() != m {
            return Err(Error::DimensionMismatch("quotient generator length".into()));
        }
    }
    let gmat = IntMatrix::from_columns(
        &gens.iter().map(|g| ambient.reduce(g)).collect::<Vec<_>>(),
        m,
    )?;
    let full = gmat.hstack(&IntMatrix::diagonal(ambient.factors()))?;
    let snf = smith_normal_form(&full);
    let diag = snf.diagonal();
    debug_assert!(diag.len() == m && !diag.iter().any(Zero::is_zero));
    let mut kept = Vec::new();
    for (i, d) in diag.iter().enumerate() {
        if d > &BigInt::one() {
            kept.push(i);
        }
    }
    let group = FgAbelianGroup::new(kept.iter().map(|&i| diag[i].clone()).collect())?;
    let mut proj = IntMatrix::zeros(kept.len(), m);
    for (r, &i) in kept.iter().enumerate() {
        for j in 0..m {
            proj.set(r, j, snf.u.get(i, j).clone());
        }
    }
    Ok(Quotient { ambient: ambient.clone(), group, proj })
}

/// Kernel of a homomorphism, as a subgroup of its source.
pub fn hom_kernel(f: &AbelianHom) -> Result<Subgroup> {
    let lat = kernel_mod(&f.matrix, f.target.factors())?;
    let gens: Vec<Vec<BigInt>> = (0..lat.cols()).map(|j| f.source.reduce(&lat.column(j))).collect();
    Subgroup::generated(&f.source, &gens)
}

/// Image of a homomorphism, as a subgroup of its target.
pub fn hom_image(f: &AbelianHom) -> Result<Subgroup> {
    let gens: Vec<Vec<BigInt>> =
        (0..f.matrix.cols()).map(|j| f.target.reduce(&f.matrix.column(j))).collect();
    Subgroup::generated(&f.target, &gens)
}

/// Validates a finite abelian group Cayley table (identity at index 0) and
/// returns its invariant-factor form together with the isomorphism sending
/// carrier index `i` to the element index of its canonical coordinates.
pub fn decompose_abelian(table: &[Vec<usize>]) -> Result<(FgAbelianGroup, Vec<usize>)> {
    let n = table.len();
    if n == 0 {
        return Err(Error::NotAGroup("empty carrier".into()));
    }
    for row in table {
        if row.len() != n || row.iter().any(|&x| x >= n) {
            return Err(Error::NotAGroup("table is not closed over the carrier".into()));
        }
    }
    for i in 0..n {
        if table[0][i] != i || table[i][0] != i {
            return Err(Error::IdentityNotZero);
        }
    }
    for a in 0..n {
        for b in 0..n {
            if table[a][b] != table[b][a] {
                return Err(Error::NotAbelian(a, b));
            }
            for c in 0..n {
                if table[table[a][b]][c] != table[a][table[b][c]] {
                    return Err(Error::NotAGroup(format!(
                        "associativity fails at ({a}, {b}, {c})"
                    )));
                }
            }
        }
        if !table[a].contains(&0) {
            return Err(Error::NotAGroup(format!("element {a} has no inverse")));
        }
    }

    // Present the group on all carrier elements with relations
    // e_i + e_j - e_{i+j}; the Smith form of the relation lattice yields the
    // invariant factors and canonical coordinates at once.
    let mut rel = IntMatrix::zeros(n, n * n);
    for i in 0..n {
        for j in 0..n {
            let col = i * n + j;
            let mut add = |row: usize, delta: i64| {
                let v = rel.get(row, col) + BigInt::from(delta);
                rel.set(row, col, v);
            };
            add(i, 1);
            add(j, 1);
            add(table[i][j], -1);
        }
    }
    let snf = smith_normal_form(&rel);
    let diag = snf.diagonal();
    debug_assert!(diag.len() == n && !diag.iter().any(Zero::is_zero));
    let mut kept = Vec::new();
    for (i, d) in diag.iter().enumerate() {
        if d > &BigInt::one() {
            kept.push(i);
        }
    }
    let group = FgAbelianGroup::new(kept.iter().map(|&i| diag[i].clone()).collect())?;
    let mut index_map = vec![0usize; n];
    for i in 0..n {
        let coords: Vec<BigInt> = kept.iter().map(|&r| snf.u.get(r, i).clone()).collect();
        index_map[i] = group.index_of(&coords);
    }
    // The presentation argument guarantees a bijection; check it anyway.
    let mut seen = vec![false; n];
    for &idx in &index_map {
        if idx >= n || seen[idx] {
            return Err(Error::NotAGroup("canonical coordinates are not a bijection".into()));
        }
        seen[idx] = true;
    }
    Ok((group, index_map))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic_table(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
    }

    #[test]
    fn decompose_cyclic_four() {
        let (g, map) = decompose_abelian(&cyclic_table(4)).unwrap();
        assert_eq!(g.factors(), &[BigInt::from(4)]);
        assert_eq!(map[0], 0);
    }

    #[test]
    fn decompose_klein_four() {
        let xor: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
        let (g, _) = decompose_abelian(&xor).unwrap();
        assert_eq!(g.factors(), &[BigInt::from(2), BigInt::from(2)]);
    }

    #[test]
    fn decompose_rejects_non_group() {
        // 0 is an identity but the rest is not associative.
        let bad = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 0, 0]];
        assert!(matches!(decompose_abelian(&bad), Err(Error::NotAGroup(_))));
    }

    #[test]
    fn decompose_rejects_shifted_identity() {
        // Z/2 written with identity at index 1.
        let bad = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(decompose_abelian(&bad), Err(Error::IdentityNotZero));
    }

    #[test]
    fn decompose_roundtrip_is_canonical_addition() {
        for table in [cyclic_table(6), (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect()]
        {
            let (g, map) = decompose_abelian(&table).unwrap();
            assert_eq!(g.size(), table.len());
            for i in 0..table.len() {
                for j in 0..table.len() {
                    assert_eq!(map[table[i][j]], g.add_index(map[i], map[j]));
                }
            }
        }
    }

    #[test]
    fn kernel_of_zero_map_is_everything() {
        let z2 = FgAbelianGroup::cyclic(2);
        let f = AbelianHom::zero(z2.clone(), z2);
        let k = hom_kernel(&f).unwrap();
        assert_eq!(k.order(), BigInt::from(2));
    }

    #[test]
    fn image_of_doubling_on_z4() {
        let z4 = FgAbelianGroup::cyclic(4);
        let f =
            AbelianHom::new(z4.clone(), z4, IntMatrix::from_i64_rows(&[&[2]])).unwrap();
        let im = hom_image(&f).unwrap();
        assert_eq!(im.order(), BigInt::from(2));
        let k = hom_kernel(&f).unwrap();
        assert_eq!(k.order() * im.order(), BigInt::from(4));
    }

    #[test]
    fn quotient_of_klein_by_diagonal() {
        let k4 = FgAbelianGroup::from_u64(&[2, 2]).unwrap();
        let diag = vec![vec![BigInt::from(1), BigInt::from(1)]];
        let q = quotient_invariants(&k4, &diag).unwrap();
        assert_eq!(q.group.factors(), &[BigInt::from(2)]);
        // Projection kills exactly the diagonal subgroup.
        assert!(q.project(&[BigInt::from(1), BigInt::from(1)]).unwrap()[0].is_zero());
        assert!(!q.project(&[BigInt::from(1), BigInt::from(0)]).unwrap()[0].is_zero());
    }

    #[test]
    fn kernel_times_image_exhausts_source() {
        // All homs Z/4 x Z/2 -> Z/4, exhaustively.
        let src = FgAbelianGroup::from_u64(&[2, 4]).unwrap();
        let tgt = FgAbelianGroup::cyclic(4);
        for a in 0..4i64 {
            for b in 0..4i64 {
                let m = IntMatrix::from_i64_rows(&[&[a, b]]);
                let Ok(f) = AbelianHom::new(src.clone(), tgt.clone(), m) else { continue };
                let k = hom_kernel(&f).unwrap();
                let im = hom_image(&f).unwrap();
                assert_eq!(k.order() * im.order(), src.order());
            }
        }
    }

    #[test]
    fn subgroup_membership_and_elements() {
        let g = FgAbelianGroup::from_u64(&[2, 4]).unwrap();
        let sub =
            Subgroup::generated(&g, &[vec![BigInt::from(0), BigInt::from(2)]]).unwrap();
        assert_eq!(sub.order(), BigInt::from(2));
        assert!(sub.contains(&[BigInt::from(0), BigInt::from(2)]).unwrap());
        assert!(!sub.contains(&[BigInt::from(1), BigInt::from(0)]).unwrap());
        assert_eq!(sub.elements().unwrap().len(), 2);
    }

    #[test]
    fn element_indexing_roundtrip() {
        let g = FgAbelianGroup::from_u64(&[2, 4]).unwrap();
        for i in 0..g.size() {
            assert_eq!(g.index_of(&g.element(i)), i);
        }
        assert_eq!(g.element(0), g.zero());
    }

    #[test]
    fn trivial_group_has_empty_factors() {
        let g = FgAbelianGroup::trivial();
        assert_eq!(g.size(), 1);
        assert_eq!(g.element(0), Vec::<BigInt>::new());
    }
}
