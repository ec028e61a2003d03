//! Finite-dimensional graded vector spaces over the rationals, Koszul signs,
//! unshuffles, degree shifts and duals.

use crate::error::Error;
use crate::scalar::{sign_pow, Rat, Ring};
use crate::Result;
use num_traits::One;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Tag distinguishing the subalgebra part of a split basis.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Part {
    A,
    B,
}

/// A named homogeneous basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisVector {
    pub name: String,
    pub degree: i64,
    /// Set when the ambient space carries a designated splitting.
    pub part: Option<Part>,
}

/// A finite graded vector space given by an ordered basis with distinct names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    pub name: String,
    pub basis: Vec<BasisVector>,
}

pub type SpaceRef = Arc<GradedSpace>;

impl GradedSpace {
    pub fn new(name: &str, basis: Vec<BasisVector>) -> Result<SpaceRef> {
        let mut seen = std::collections::BTreeSet::new();
        for v in &basis {
            if !seen.insert(v.name.clone()) {
                return Err(Error::DuplicateEntry(format!(
                    "basis vector `{}` in space `{}`",
                    v.name, name
                )));
            }
        }
        Ok(Arc::new(GradedSpace {
            name: name.to_string(),
            basis,
        }))
    }

    /// Space with basis `names` all in the same degree, no split.
    pub fn uniform(name: &str, names: &[&str], degree: i64) -> SpaceRef {
        Self::new(
            name,
            names
                .iter()
                .map(|n| BasisVector {
                    name: n.to_string(),
                    degree,
                    part: None,
                })
                .collect(),
        )
        .expect("distinct names")
    }

    /// One-dimensional space spanned by "1" in degree zero; the coefficient
    /// space of plain polynomial elements.
    pub fn scalar_space() -> SpaceRef {
        GradedSpace::uniform("k", &["1"], 0)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self, idx: usize) -> i64 {
        self.basis[idx].degree
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.basis
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::UnknownName(format!("{} in space {}", name, self.name)))
    }

    /// Indices of the A-part (requires a split basis).
    pub fn part_indices(&self, part: Part) -> Vec<usize> {
        self.basis
            .iter()
            .enumerate()
            .filter(|(_, v)| v.part == Some(part))
            .map(|(i, _)| i)
            .collect()
    }

    /// The dual space: same basis order, names suffixed `∨`, degrees negated.
    /// Part tags are preserved.
    pub fn dual(self: &SpaceRef) -> SpaceRef {
        Arc::new(GradedSpace {
            name: format!("{}∨", self.name),
            basis: self
                .basis
                .iter()
                .map(|v| BasisVector {
                    name: dual_name(&v.name),
                    degree: -v.degree,
                    part: v.part,
                })
                .collect(),
        })
    }

    /// The `k`-shifted space: a vector of degree `d` gets degree `d - k`,
    /// so that the degree-`n` slice of the result is the degree-`n+k` slice
    /// of the original.
    pub fn shift(self: &SpaceRef, k: i64) -> SpaceRef {
        if k == 0 {
            return self.clone();
        }
        Arc::new(GradedSpace {
            name: format!("{}[{}]", self.name, k),
            basis: self
                .basis
                .iter()
                .map(|v| BasisVector {
                    name: v.name.clone(),
                    degree: v.degree - k,
                    part: v.part,
                })
                .collect(),
        })
    }

    /// Tensor product space `self ⊗ other`; basis is the row-major cartesian
    /// product with summed degrees.
    pub fn tensor(self: &SpaceRef, other: &SpaceRef) -> SpaceRef {
        let mut basis = Vec::with_capacity(self.dim() * other.dim());
        for u in &self.basis {
            for w in &other.basis {
                basis.push(BasisVector {
                    name: format!("{}⊗{}", u.name, w.name),
                    degree: u.degree + w.degree,
                    part: None,
                });
            }
        }
        Arc::new(GradedSpace {
            name: format!("{}⊗{}", self.name, other.name),
            basis,
        })
    }

    /// Index into `self ⊗ other` from factor indices.
    pub fn tensor_index(&self, other: &GradedSpace, i: usize, j: usize) -> usize {
        i * other.dim() + j
    }
}

fn dual_name(name: &str) -> String {
    format!("{}∨", name)
}

/// `Hom(E, F) ≅ E∨ ⊗ F`; basis element `e_i∨⊗f_j` acts by
/// `v ↦ (-1)^{|v||f_j|} e_i∨(v) f_j`.
pub fn hom_space(e: &SpaceRef, f: &SpaceRef) -> SpaceRef {
    e.dual().tensor(f)
}

/// `End(E) = Hom(E, E)`.
pub fn end_space(e: &SpaceRef) -> SpaceRef {
    hom_space(e, e)
}

/// Action of the `Hom(E, F)` basis element with index `hom_idx = i·dim F + j`
/// (that is, `e_i∨ ⊗ f_j`) on `e_k`: `(-1)^{|e_k||f_j|} δ_{ik} f_j`.
pub fn hom_apply(
    e: &GradedSpace,
    f: &GradedSpace,
    hom_idx: usize,
    vec_idx: usize,
) -> Option<(usize, Rat)> {
    let i = hom_idx / f.dim();
    let j = hom_idx % f.dim();
    if i != vec_idx {
        return None;
    }
    Some((j, sign_pow(e.degree(vec_idx) * f.degree(j))))
}

/// Composition `φ∘ψ` of `End(E)` basis elements: with `φ = e_{i1}∨⊗e_{j1}`
/// and `ψ = e_{i2}∨⊗e_{j2}`, the composite is nonzero iff `i1 = j2` and
/// equals `(-1)^{|e_{i2}||e_{j2}| + |e_{j2}||e_{j1}| + |e_{i2}||e_{j1}|}
/// e_{i2}∨⊗e_{j1}`.
pub fn end_compose(
    e: &GradedSpace,
    (i1, j1): (usize, usize),
    (i2, j2): (usize, usize),
) -> Option<((usize, usize), Rat)> {
    if i1 != j2 {
        return None;
    }
    let s = sign_pow(
        e.degree(i2) * e.degree(j2) + e.degree(j2) * e.degree(j1) + e.degree(i2) * e.degree(j1),
    );
    Some(((i2, j1), s))
}

/// The identity operator as a vector in `End(E)`:
/// `id = Σ_i (-1)^{|e_i|} e_i∨⊗e_i`.
pub fn end_identity(e: &SpaceRef) -> Vector<Rat> {
    let end = end_space(e);
    let mut v = Vector::zero(&end);
    for i in 0..e.dim() {
        v.add_term(i * e.dim() + i, sign_pow(e.degree(i)));
    }
    v
}

/// Sparse vector in a graded space.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector<C: Ring = Rat> {
    pub space: SpaceRef,
    pub coeffs: BTreeMap<usize, C>,
}

impl<C: Ring> Vector<C> {
    pub fn zero(space: &SpaceRef) -> Self {
        Vector {
            space: space.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn basis(space: &SpaceRef, idx: usize) -> Self {
        let mut v = Self::zero(space);
        v.add_term(idx, C::one());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, idx: usize, c: C) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(idx).or_insert_with(C::zero);
        *entry = entry.radd(&c);
        if entry.is_zero() {
            self.coeffs.remove(&idx);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, c) in &other.coeffs {
            out.add_term(*i, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, c) in &other.coeffs {
            out.add_term(*i, c.rneg());
        }
        out
    }

    pub fn scale(&self, by: &C) -> Self {
        let mut out = Self::zero(&self.space);
        for (i, c) in &self.coeffs {
            out.add_term(*i, c.rmul(by));
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&C::one().rneg())
    }

    /// Degree when homogeneous; error when terms disagree.
    pub fn homogeneous_degree(&self) -> Result<Option<i64>> {
        let mut deg = None;
        for i in self.coeffs.keys() {
            let d = self.space.degree(*i);
            match deg {
                None => deg = Some(d),
                Some(prev) if prev != d => {
                    return Err(Error::DegreeMismatch(format!(
                        "vector mixes degrees {} and {}",
                        prev, d
                    )))
                }
                _ => {}
            }
        }
        Ok(deg)
    }
}

impl<C: Ring> fmt::Display for Vector<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}·{}", c, self.space.basis[*i].name)?;
        }
        Ok(())
    }
}

/// A permutation of `{1, …, n}` stored as the image list (0-based internally).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in images {
            if i >= n || seen[i] {
                return Err(Error::Invalid("not a bijection".into()));
            }
            seen[i] = true;
        }
        Ok(Permutation(images.to_vec()))
    }

    /// `self ∘ other`: applies `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }
}

/// The sign `ε(σ)` defined by
/// `v_1 ⊙ … ⊙ v_n = ε(σ) · v_{σ(1)} ⊙ … ⊙ v_{σ(n)}`
/// for homogeneous `v_i` of the given degrees: the product of `(-1)^{|v_i||v_j|}`
/// over all inversions of σ (pairs moved past each other).
pub fn koszul_sign(perm: &Permutation, degrees: &[i64]) -> Result<Rat> {
    if perm.len() != degrees.len() {
        return Err(Error::SizeMismatch(format!(
            "permutation of size {} on {} degrees",
            perm.len(),
            degrees.len()
        )));
    }
    let mut sign = Rat::one();
    let img = &perm.0;
    for i in 0..img.len() {
        for j in (i + 1)..img.len() {
            if img[i] > img[j] {
                // v_{σ(i)} and v_{σ(j)} appear out of original order.
                sign = sign * sign_pow(degrees[img[i]] * degrees[img[j]]);
            }
        }
    }
    Ok(sign)
}

/// All permutations of `{1..n}` (`n` = sum of `block_sizes`) that are
/// increasing within each consecutive block, in lexicographic order of the
/// image lists. These are the unshuffles `sh(i_1, …, i_r)`.
pub fn unshuffles(block_sizes: &[usize]) -> Vec<Permutation> {
    let n: usize = block_sizes.iter().sum();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fill_unshuffles(block_sizes, n, &mut current, &mut used, &mut out);
    out
}

fn fill_unshuffles(
    blocks: &[usize],
    n: usize,
    current: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Permutation>,
) {
    if current.len() == n {
        out.push(Permutation(current.clone()));
        return;
    }
    // Locate the block and position-within-block of the next slot.
    let mut pos = current.len();
    let mut block_start = 0;
    for &b in blocks {
        if pos < b {
            break;
        }
        pos -= b;
        block_start += b;
    }
    let _ = block_start;
    // Must exceed the previous entry of the same block (increasing blocks).
    let lower = if pos == 0 {
        0
    } else {
        current[current.len() - 1] + 1
    };
    for v in lower..n {
        if !used[v] {
            used[v] = true;
            current.push(v);
            fill_unshuffles(blocks, n, current, used, out);
            current.pop();
            used[v] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use proptest::prelude::*;

    fn sign_i(perm: &Permutation, degrees: &[i64]) -> i64 {
        let s = koszul_sign(perm, degrees).unwrap();
        if s == rat(1) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn identity_sign_is_one() {
        assert_eq!(sign_i(&Permutation::identity(4), &[1, -1, 0, 3]), 1);
    }

    #[test]
    fn transposition_of_two_odds_is_minus_one() {
        let swap = Permutation::from_images(&[1, 0]).unwrap();
        assert_eq!(sign_i(&swap, &[-1, -1]), -1);
        assert_eq!(sign_i(&swap, &[0, 1]), 1);
    }

    #[test]
    fn three_cycle_sign_matches_transposition_product() {
        // images [2,0,1] read: v1⊙v2⊙v3 = ε · v3⊙v1⊙v2.
        let degs = [1i64, 1, 1];
        let first = Permutation::from_images(&[0, 2, 1]).unwrap(); // -> v1 v3 v2
        let second = Permutation::from_images(&[1, 0, 2]).unwrap(); // swap the front pair
        let cyc = first.compose(&second);
        assert_eq!(cyc, Permutation::from_images(&[2, 0, 1]).unwrap());
        // Oracle: compose the adjacent-transposition signs via the cocycle rule
        // ε(σ∘τ; d) = ε(σ; d) · ε(τ; d after σ).
        let degs_after_first: Vec<i64> = (0..3).map(|i| degs[first.0[i]]).collect();
        let oracle = koszul_sign(&first, &degs).unwrap()
            * koszul_sign(&second, &degs_after_first).unwrap();
        assert_eq!(koszul_sign(&cyc, &degs).unwrap(), oracle);
        assert_eq!(sign_i(&cyc, &degs), 1);
    }

    #[test]
    fn unshuffle_counts_are_binomial() {
        assert_eq!(unshuffles(&[1, 1]).len(), 2);
        assert_eq!(unshuffles(&[2, 1]).len(), 3);
        assert_eq!(unshuffles(&[2, 2]).len(), 6);
        // brute force oracle for (2,2): filter S4.
        let all = permutohedron_all(4);
        let brute: Vec<_> = all
            .into_iter()
            .filter(|p| p[0] < p[1] && p[2] < p[3])
            .collect();
        assert_eq!(brute.len(), 6);
        let mine: Vec<Vec<usize>> = unshuffles(&[2, 2]).into_iter().map(|p| p.0).collect();
        assert_eq!(mine, brute);
    }

    fn permutohedron_all(n: usize) -> Vec<Vec<usize>> {
        // lexicographic enumeration of S_n
        let mut out = Vec::new();
        let mut cur = Vec::new();
        let mut used = vec![false; n];
        fn rec(n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == n {
                out.push(cur.clone());
                return;
            }
            for v in 0..n {
                if !used[v] {
                    used[v] = true;
                    cur.push(v);
                    rec(n, cur, used, out);
                    cur.pop();
                    used[v] = false;
                }
            }
        }
        rec(n, &mut cur, &mut used, &mut out);
        out
    }

    #[test]
    fn unshuffle_counts_choose_l_plus_k() {
        fn binom(n: usize, k: usize) -> usize {
            (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
        }
        for l in 0..=6usize {
            for k in 0..=6usize {
                assert_eq!(unshuffles(&[l, k]).len(), binom(l + k, l), "sh({l},{k})");
            }
        }
    }

    #[test]
    fn shift_and_dual_degrees() {
        let b = GradedSpace::uniform("B", &["b"], -1);
        let shifted = b.shift(-2);
        assert_eq!(shifted.degree(0), 1);
        assert_eq!(b.shift(0).degree(0), -1);
        assert_eq!(b.shift(3).shift(-3).degree(0), b.degree(0));
        let d = b.dual();
        assert_eq!(d.degree(0), 1);
        assert_eq!(d.dual().degree(0), b.degree(0));
    }

    proptest! {
        // ε is a group 1-cocycle: ε(σ∘τ) = ε(σ on permuted degrees)·ε(τ).
        #[test]
        fn koszul_is_multiplicative(seed in 0u64..500, n in 1usize..6) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let degrees: Vec<i64> = (0..n).map(|_| rng.gen_range(-2i64..3)).collect();
            let mut im1: Vec<usize> = (0..n).collect();
            let mut im2: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                im1.swap(i, rng.gen_range(0..=i));
                im2.swap(i, rng.gen_range(0..=i));
            }
            let s = Permutation::from_images(&im1).unwrap();
            let t = Permutation::from_images(&im2).unwrap();
            let st = s.compose(&t);
            // degrees seen by t after s has acted: d'_i = d_{s(i)}
            let degrees_after_s: Vec<i64> = (0..n).map(|i| degrees[s.0[i]]).collect();
            let lhs = koszul_sign(&st, &degrees).unwrap();
            let rhs = koszul_sign(&s, &degrees).unwrap() * koszul_sign(&t, &degrees_after_s).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
