//! The weight-truncated Chevalley-Eilenberg complex of a module: exact
//! differential blocks per total degree, cohomology dimensions and
//! representatives, and coboundary solving with inconsistency certificates.
//!
//! The truncation quotients away monomials of weight above `N`. The
//! differential never lowers weight once the constant bracket vanishes, so
//! the quotient is again a complex; construction is refused otherwise.

use crate::error::Error;
use crate::exec::Exec;
use crate::linalg::{kernel_basis, rank, rref, solve, Matrix, SolveOutcome};
use crate::module::AModule;
use crate::poly::{monomials_of_weight, Element, Monomial};
use crate::scalar::{rat, Rat};
use crate::Result;
use num_traits::Zero;
use std::collections::BTreeMap;

/// A cochain of the complex `O^{≤N}(A) ⊗ U` is a polynomial element over the
/// subalgebra's dual generators with coefficients in the module space.
pub type Cochain = Element<Rat>;

#[derive(Clone, Debug)]
pub struct TruncatedComplex {
    pub module: AModule,
    pub max_weight: usize,
    bases: BTreeMap<i64, Vec<(Monomial, u32)>>,
    index: BTreeMap<i64, BTreeMap<(Monomial, u32), usize>>,
    mats: BTreeMap<i64, Matrix>,
    degree_range: (i64, i64),
}

impl TruncatedComplex {
    /// Builds the complex and verifies `∂² = 0` on every adjacent pair of
    /// degrees of the truncation, exactly.
    pub fn build(module: &AModule, max_weight: usize) -> Result<TruncatedComplex> {
        if !module.base.lambda0().is_zero() {
            return Err(Error::NonzeroCurvature(
                "the base algebra has a nonzero constant bracket; the weight truncation would not be a complex"
                    .into(),
            ));
        }
        let mut cx = TruncatedComplex {
            module: module.clone(),
            max_weight,
            bases: BTreeMap::new(),
            index: BTreeMap::new(),
            mats: BTreeMap::new(),
            degree_range: (0, 0),
        };
        // enumerate every total degree with a nonempty basis
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        let dual = &module.base.dual;
        let all: Vec<u32> = (0..dual.dim() as u32).collect();
        let mut by_degree: BTreeMap<i64, Vec<(Monomial, u32)>> = BTreeMap::new();
        for w in 0..=max_weight {
            for m in monomials_of_weight(dual, w, &all) {
                let mdeg = m.degree(dual);
                for u in 0..module.space.dim() {
                    let n = mdeg + module.space.degree(u);
                    by_degree.entry(n).or_default().push((m.clone(), u as u32));
                }
            }
        }
        for (n, mut basis) in by_degree {
            basis.sort();
            lo = lo.min(n);
            hi = hi.max(n);
            let idx = basis
                .iter()
                .enumerate()
                .map(|(i, k)| (k.clone(), i))
                .collect();
            cx.bases.insert(n, basis);
            cx.index.insert(n, idx);
        }
        if lo > hi {
            lo = 0;
            hi = 0;
        }
        cx.degree_range = (lo, hi);
        for n in lo..=hi {
            let m = cx.assemble(n)?;
            cx.mats.insert(n, m);
        }
        // ∂² = 0, degree by degree, exact
        for n in lo..hi {
            let d0 = cx.mats.get(&n).unwrap();
            let d1 = cx.mats.get(&(n + 1)).unwrap();
            if !d1.mul(d0).is_zero() {
                return Err(Error::Invalid(format!(
                    "differential does not square to zero at degree {}",
                    n
                )));
            }
        }
        Ok(cx)
    }

    pub fn degree_range(&self) -> (i64, i64) {
        self.degree_range
    }

    pub fn basis(&self, n: i64) -> &[(Monomial, u32)] {
        self.bases.get(&n).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn dim(&self, n: i64) -> usize {
        self.basis(n).len()
    }

    /// The differential applied to a cochain (polynomial form), truncated.
    pub fn differential(&self, z: &Cochain) -> Cochain {
        let q = self.module.base.q.apply(z);
        let d = self.module.op.apply(z);
        q.add(&d).truncate_weight(self.max_weight)
    }

    /// Matrix of the differential from degree `n` to `n + 1`.
    pub fn matrix(&self, n: i64) -> Matrix {
        match self.mats.get(&n) {
            Some(m) => m.clone(),
            None => Matrix::zero(self.dim(n + 1), self.dim(n)),
        }
    }

    fn assemble(&self, n: i64) -> Result<Matrix> {
        let cols = self.basis(n).to_vec();
        let target = self.index.get(&(n + 1));
        let rows = self.dim(n + 1);
        let mut mat = Matrix::zero(rows, cols.len());
        for (j, (m, u)) in cols.iter().enumerate() {
            let mut e = Element::zero(&self.module.base.dual, &self.module.space);
            e.add_term(m.clone(), *u, rat(1));
            let img = self.differential(&e);
            for ((mm, uu), c) in &img.terms {
                let Some(tidx) = target.and_then(|t| t.get(&(mm.clone(), *uu))) else {
                    return Err(Error::Invalid(format!(
                        "differential left the degree-{} block",
                        n + 1
                    )));
                };
                mat.set(*tidx, j, c.clone());
            }
        }
        Ok(mat)
    }

    pub fn cochain_to_coords(&self, z: &Cochain) -> Result<(i64, Vec<Rat>)> {
        let Some(n) = z.homogeneous_degree()? else {
            return Ok((0, vec![Rat::zero(); self.dim(0)]));
        };
        let idx = self
            .index
            .get(&n)
            .ok_or_else(|| Error::Invalid(format!("no degree-{} block in the truncation", n)))?;
        let mut v = vec![Rat::zero(); self.dim(n)];
        for ((m, u), c) in &z.terms {
            let Some(i) = idx.get(&(m.clone(), *u)) else {
                return Err(Error::Invalid(
                    "cochain exceeds the truncation weight".into(),
                ));
            };
            v[*i] = c.clone();
        }
        Ok((n, v))
    }

    pub fn coords_to_cochain(&self, n: i64, v: &[Rat]) -> Cochain {
        let mut out = Element::zero(&self.module.base.dual, &self.module.space);
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                let (m, u) = &self.basis(n)[i];
                out.add_term(m.clone(), *u, c.clone());
            }
        }
        out
    }

    /// Whether the degree-`n` block is independent of the truncation weight
    /// (every dual generator of the base has degree ≥ 1, so weights are
    /// bounded by the degree).
    pub fn exact_at(&self, n: i64) -> bool {
        let dual = &self.module.base.dual;
        if (0..dual.dim()).any(|g| dual.degree(g) < 1) {
            return false;
        }
        let min_u = (0..self.module.space.dim())
            .map(|u| self.module.space.degree(u))
            .min()
            .unwrap_or(0);
        n - min_u <= self.max_weight as i64
    }

    /// Cohomology at degree `n`: dimension and representatives, the latter
    /// as reduced-echelon kernel vectors minus their image projections.
    pub fn cohomology(&self, n: i64, _exec: Exec) -> CohomologyResult {
        let d_in = self.matrix(n - 1);
        let d_out = self.matrix(n);
        let rank_in = rank(&d_in);
        let kernel = kernel_basis(&d_out);
        let dim = kernel.len() - rank_in;
        // reduce kernel vectors against the image: stack image columns as
        // rows, then row-reduce [image; kernel] and keep the kernel rows
        // that introduce new pivots, minus their image projection.
        let cols = self.dim(n);
        let mut stacked = Matrix::zero(rank_in + kernel.len(), cols);
        let img_ech = rref(&transpose_cols(&d_in));
        for r in 0..rank_in {
            for c in 0..cols {
                stacked.set(r, c, img_ech.mat.get(r, c).clone());
            }
        }
        for (ki, kv) in kernel.iter().enumerate() {
            for c in 0..cols {
                stacked.set(rank_in + ki, c, kv[c].clone());
            }
        }
        let ech = rref(&stacked);
        // the row space of the stack is the kernel (the image is contained
        // in it); rows whose pivot is not an image pivot form a canonical
        // complement of the image
        let img_pivots: std::collections::BTreeSet<usize> =
            img_ech.pivots.iter().copied().collect();
        let mut reps = Vec::new();
        for (r, &p) in ech.pivots.iter().enumerate() {
            if !img_pivots.contains(&p) {
                let v: Vec<Rat> = (0..cols).map(|c| ech.mat.get(r, c).clone()).collect();
                reps.push(self.coords_to_cochain(n, &v));
            }
        }
        debug_assert_eq!(reps.len(), dim);
        CohomologyResult {
            degree: n,
            dim,
            representatives: reps,
            exact: self.exact_at(n) && self.exact_at(n - 1),
        }
    }

    /// Solves `∂y = z` in the truncation. Errors unless `z` is a cocycle.
    pub fn solve_coboundary(&self, z: &Cochain) -> Result<Primitive> {
        let dz = self.differential(z);
        if !dz.is_zero() {
            return Err(Error::NotACocycle(dz.to_string()));
        }
        if z.is_zero() {
            return Ok(Primitive::Found(Element::zero(
                &self.module.base.dual,
                &self.module.space,
            )));
        }
        let (n, coords) = self.cochain_to_coords(z)?;
        let a = self.matrix(n - 1);
        match solve(&a, &coords) {
            SolveOutcome::Solution(x) => Ok(Primitive::Found(self.coords_to_cochain(n - 1, &x))),
            SolveOutcome::Inconsistent { certificate } => Ok(Primitive::NoSolutionUpToWeight {
                max_weight: self.max_weight,
                exact: self.exact_at(n) && self.exact_at(n - 1),
                certificate,
            }),
        }
    }
}

/// Image columns as rows (for reducing kernel vectors against the image).
fn transpose_cols(d_in: &Matrix) -> Matrix {
    let mut t = Matrix::zero(d_in.cols, d_in.rows);
    for r in 0..d_in.rows {
        for c in 0..d_in.cols {
            t.set(c, r, d_in.get(r, c).clone());
        }
    }
    t
}

#[derive(Clone, Debug)]
pub struct CohomologyResult {
    pub degree: i64,
    pub dim: usize,
    pub representatives: Vec<Cochain>,
    /// True when the block is stable under raising the truncation weight.
    pub exact: bool,
}

/// Outcome of coboundary solving.
pub enum Primitive {
    Found(Cochain),
    NoSolutionUpToWeight {
        max_weight: usize,
        /// whether the verdict is weight-independent
        exact: bool,
        certificate: Vec<Rat>,
    },
}

impl Primitive {
    pub fn found(&self) -> Option<&Cochain> {
        match self {
            Primitive::Found(c) => Some(c),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graded::GradedSpace;
    use crate::module::AModule;
    use rand::SeedableRng;

    #[test]
    fn one_odd_generator_zero_structure() {
        // A = span{a} degree -1 abelian, E = span{e} degree 0 trivial:
        // O(A) = k ⊕ k·a∨, so H⁰ and H¹ are one-dimensional.
        let a = GradedSpace::uniform("A", &["a"], -1);
        let alg = crate::algebra::LInftyAlgebra::from_brackets(&a, vec![]).unwrap();
        let e = GradedSpace::uniform("E", &["e"], 0);
        let m = AModule::trivial(&alg, &e).unwrap();
        let cx = TruncatedComplex::build(&m, 3).unwrap();
        assert_eq!(cx.cohomology(0, Exec::Sequential).dim, 1);
        assert_eq!(cx.cohomology(1, Exec::Sequential).dim, 1);
        assert_eq!(cx.cohomology(2, Exec::Sequential).dim, 0);
    }

    #[test]
    fn k_pair_module_complex_squares_to_zero() {
        let (_, module) = fixtures::k_pair(1, 2, 3, 5);
        let cx = TruncatedComplex::build(&module, 4).unwrap();
        let (lo, hi) = cx.degree_range();
        assert!(lo < hi);
        // ∂ encodes the module operator on the unit cochain
        let mut unit = Element::zero(&module.base.dual, &module.space);
        unit.add_term(Monomial::one(), 0, rat(1));
        let img = cx.differential(&unit);
        assert_eq!(img, module.op.images[0]);
    }

    #[test]
    fn euler_characteristic_matches_rank_nullity() {
        let (_, module) = fixtures::delta_pair();
        let dualmod = crate::module::dual_module(&module).unwrap();
        let endmod = crate::module::tensor_module(&dualmod, &module).unwrap();
        let cx = TruncatedComplex::build(&endmod, 3).unwrap();
        let (lo, hi) = cx.degree_range();
        let mut euler_h = rat(0);
        let mut euler_c = rat(0);
        for n in lo..=hi {
            let sign = crate::scalar::sign_pow(n);
            euler_h = euler_h + &sign * rat(cx.cohomology(n, Exec::Sequential).dim as i64);
            euler_c = euler_c + &sign * rat(cx.dim(n) as i64);
        }
        assert_eq!(euler_h, euler_c);
    }

    #[test]
    fn representatives_are_cocycles_and_independent() {
        let (_, module) = fixtures::delta_pair();
        let cx = TruncatedComplex::build(&module, 3).unwrap();
        let (lo, hi) = cx.degree_range();
        for n in lo..=hi {
            let h = cx.cohomology(n, Exec::Sequential);
            for rep in &h.representatives {
                assert!(cx.differential(rep).is_zero());
            }
        }
    }

    #[test]
    fn construct_then_solve_roundtrip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let (_, module) = fixtures::delta_pair();
        let cx = TruncatedComplex::build(&module, 4).unwrap();
        let (lo, hi) = cx.degree_range();
        let mut tested = 0;
        for n in lo..hi {
            if cx.dim(n) == 0 {
                continue;
            }
            // random y, z = ∂y, solve ∂y' = z
            use rand::Rng;
            let coords: Vec<Rat> = (0..cx.dim(n))
                .map(|_| crate::scalar::rat(rng.gen_range(-3i64..=3)))
                .collect();
            let y = cx.coords_to_cochain(n, &coords);
            let z = cx.differential(&y);
            if z.is_zero() {
                continue;
            }
            match cx.solve_coboundary(&z).unwrap() {
                Primitive::Found(y2) => {
                    assert_eq!(cx.differential(&y2), z);
                    tested += 1;
                }
                _ => panic!("constructed coboundary must be solvable"),
            }
        }
        assert!(tested > 0);
    }

    #[test]
    fn nonzero_constant_bracket_is_refused() {
        let a = GradedSpace::uniform("A", &["a"], 1);
        let mut l0 = crate::multilinear::SymMap::new(&a, None, &a, 0, 1);
        let mut v = crate::graded::Vector::zero(&a);
        v.add_term(0, rat(1));
        l0.insert_new(&[], None, v).unwrap();
        let alg = crate::algebra::LInftyAlgebra::from_brackets(&a, vec![l0]).unwrap();
        let e = GradedSpace::uniform("E", &["e"], 0);
        let m = AModule::trivial(&alg, &e).unwrap();
        match TruncatedComplex::build(&m, 2) {
            Err(Error::NonzeroCurvature(_)) => {}
            _ => panic!("construction must be refused"),
        }
    }
}
