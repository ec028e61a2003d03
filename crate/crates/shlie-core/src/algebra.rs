//! Strongly homotopy Lie algebras presented by degree 1 graded-symmetric
//! brackets, the generalized Jacobi identities, the endomorphism algebra of
//! a graded space, morphisms (checked along both equivalent routes) and
//! abelian extensions.

use crate::error::Error;
use crate::exec::Exec;
use crate::graded::{
    end_compose, end_space, koszul_sign, BasisVector, GradedSpace, Part, SpaceRef, Vector,
};
use crate::module::AModule;
use crate::multilinear::{derivation_from_brackets, Derivation, SymMap};
use crate::poly::{monomials_of_weight, Element, Monomial};
use crate::report::CheckReport;
use crate::scalar::{rat, sign_pow, Rat};
use crate::Result;
use num_traits::Zero;
use std::sync::Arc;

/// An SH Lie algebra: a graded space with degree 1 brackets
/// `λ_k: S^k(L) → L` for `0 ≤ k ≤ k_max`, all higher brackets zero.
#[derive(Clone, Debug)]
pub struct LInftyAlgebra {
    pub space: SpaceRef,
    pub dual: SpaceRef,
    /// `brackets[k]` is `λ_k`; index 0 holds the constant bracket.
    pub brackets: Vec<SymMap>,
    /// The packaged degree 1 derivation of `O(L)`.
    pub q: Derivation<Rat>,
}

impl LInftyAlgebra {
    pub fn from_brackets(space: &SpaceRef, mut brackets: Vec<SymMap>) -> Result<Arc<Self>> {
        brackets.sort_by_key(|b| b.arity);
        let mut filled: Vec<SymMap> = Vec::new();
        for b in brackets {
            if b.degree != 1 {
                return Err(Error::DegreeMismatch(
                    "every bracket must have map degree 1".into(),
                ));
            }
            while filled.len() < b.arity {
                let k = filled.len();
                filled.push(SymMap::new(space, None, space, k, 1));
            }
            if filled.len() == b.arity {
                filled.push(b);
            } else {
                return Err(Error::DuplicateEntry(format!(
                    "bracket of arity {}",
                    b.arity
                )));
            }
        }
        if filled.is_empty() {
            filled.push(SymMap::new(space, None, space, 0, 1));
        }
        let dual = space.dual();
        let q = derivation_from_brackets(space, &dual, &filled)?;
        Ok(Arc::new(LInftyAlgebra {
            space: space.clone(),
            dual,
            brackets: filled,
            q,
        }))
    }

    pub fn from_derivation(
        space: &SpaceRef,
        q: Derivation<Rat>,
        k_max: usize,
    ) -> Result<Arc<Self>> {
        let brackets = crate::multilinear::brackets_from_derivation(&q, space, k_max)?;
        let dual = space.dual();
        debug_assert_eq!(q.gens, dual);
        Ok(Arc::new(LInftyAlgebra {
            space: space.clone(),
            dual,
            brackets,
            q,
        }))
    }

    /// Largest arity carrying a nonzero bracket.
    pub fn k_max(&self) -> usize {
        self.brackets
            .iter()
            .enumerate()
            .rev()
            .find(|(_, b)| !b.is_zero())
            .map(|(k, _)| k)
            .unwrap_or(0)
    }

    pub fn bracket(&self, k: usize) -> Option<&SymMap> {
        self.brackets.get(k).filter(|b| !b.is_zero())
    }

    /// The constant bracket `λ_0 ∈ L¹`.
    pub fn lambda0(&self) -> Vector<Rat> {
        self.brackets[0].eval_basis(&[], None)
    }

    /// Evaluates `λ_k` on mixed vector arguments; zero when no such bracket.
    pub fn eval_bracket(&self, args: &[Vector<Rat>]) -> Result<Vector<Rat>> {
        match self.brackets.get(args.len()) {
            Some(b) => b.eval(args, None),
            None => Ok(Vector::zero(&self.space)),
        }
    }

    /// The residual of the generalized Jacobi identity at one basis tuple:
    /// `Σ_{k+l=n} Σ_{σ∈sh(l,k)} ε(σ) λ_{k+1}(λ_l(u_{σ(1)},…,u_{σ(l)}),…,u_{σ(n)})`.
    pub fn jacobi_residual(&self, tuple: &[u32]) -> Result<Vector<Rat>> {
        let n = tuple.len();
        let degrees: Vec<i64> = tuple
            .iter()
            .map(|&u| self.space.degree(u as usize))
            .collect();
        let mut out = Vector::zero(&self.space);
        for l in 0..=n {
            let k = n - l;
            if self.brackets.get(l).map_or(true, |b| b.is_zero()) {
                continue;
            }
            if self.brackets.get(k + 1).map_or(true, |b| b.is_zero()) {
                continue;
            }
            for sigma in crate::graded::unshuffles(&[l, k]) {
                let sign = koszul_sign(&sigma, &degrees)?;
                let inner_tuple: Vec<u32> = sigma.0[..l].iter().map(|&i| tuple[i]).collect();
                let inner = self.brackets[l].eval_basis(&inner_tuple, None);
                if inner.is_zero() {
                    continue;
                }
                let mut args = Vec::with_capacity(k + 1);
                args.push(inner);
                for &i in &sigma.0[l..] {
                    args.push(Vector::basis(&self.space, tuple[i] as usize));
                }
                let val = self.brackets[k + 1].eval(&args, None)?;
                out = out.add(&val.scale(&sign));
            }
        }
        Ok(out)
    }

    /// Verifies the generalized Jacobi identities on every canonical basis
    /// tuple of every length up to `2·k_max - 1`; beyond that bound each
    /// summand contains a vanishing bracket.
    pub fn check_jacobi(&self, exec: Exec) -> Result<CheckReport> {
        let mut report = CheckReport::new(format!("jacobi[{}]", self.space.name));
        let k_max = self.k_max();
        let n_hi = if k_max == 0 { 0 } else { 2 * k_max - 1 };
        let all: Vec<u32> = (0..self.space.dim() as u32).collect();
        for n in 0..=n_hi {
            let tuples = monomials_of_weight(&self.space, n, &all);
            let results = exec.map(tuples, |t| {
                let res = self.jacobi_residual(&t.0);
                (t, res)
            });
            for (t, res) in results {
                let res = res?;
                report.record(res.is_zero(), || {
                    (
                        format!("n={} tuple {}", n, tuple_names(&self.space, &t.0)),
                        res.to_string(),
                    )
                });
            }
        }
        Ok(report)
    }
}

pub(crate) fn tuple_names(space: &GradedSpace, tuple: &[u32]) -> String {
    let names: Vec<&str> = tuple
        .iter()
        .map(|&i| space.basis[i as usize].name.as_str())
        .collect();
    format!("({})", names.join(","))
}

/// The endomorphism algebra of `E`, shifted: the underlying space is
/// `End(E)[1]` and the only bracket is the shifted graded commutator
/// `λ_2(φ̄, ψ̄) = (-1)^{|φ|}(φ∘ψ - (-1)^{|φ||ψ|} ψ∘φ)`, with `|φ| = |φ̄| + 1`
/// the unshifted degree.
pub fn endomorphism_algebra(e: &SpaceRef) -> Result<Arc<LInftyAlgebra>> {
    let end = end_space(e);
    let shifted = end.shift(1);
    let dim = end.dim();
    let ne = e.dim();
    let mut l2 = SymMap::new(&shifted, None, &shifted, 2, 1);
    for mono in monomials_of_weight(&shifted, 2, &(0..dim as u32).collect::<Vec<_>>()) {
        let p = mono.0[0] as usize;
        let q = mono.0[1] as usize;
        let (pi, pj) = (p / ne, p % ne);
        let (qi, qj) = (q / ne, q % ne);
        let dp = end.degree(p);
        let dq = end.degree(q);
        let mut value = Vector::zero(&shifted);
        if let Some(((i, j), s)) = end_compose(e, (pi, pj), (qi, qj)) {
            value.add_term(i * ne + j, s * sign_pow(dp));
        }
        if let Some(((i, j), s)) = end_compose(e, (qi, qj), (pi, pj)) {
            value.add_term(i * ne + j, -s * sign_pow(dp + dp * dq));
        }
        if !value.is_zero() {
            l2.insert_new(&mono.0, None, value)?;
        }
    }
    LInftyAlgebra::from_brackets(&shifted, vec![l2])
}

/// The abelian extension `A ⊕ E` of an algebra along a module: `A` stays a
/// subalgebra, `E` becomes an abelian ideal acted on through the module
/// structure. The new basis carries part tags (`A` first, then `B`).
pub fn abelian_extension(alg: &Arc<LInftyAlgebra>, module: &AModule) -> Result<Arc<LInftyAlgebra>> {
    let a_dim = alg.space.dim();
    let mut basis: Vec<BasisVector> = alg
        .space
        .basis
        .iter()
        .map(|v| BasisVector {
            name: v.name.clone(),
            degree: v.degree,
            part: Some(Part::A),
        })
        .collect();
    for v in &module.space.basis {
        basis.push(BasisVector {
            name: v.name.clone(),
            degree: v.degree,
            part: Some(Part::B),
        });
    }
    let total = GradedSpace::new(&format!("{}⊕{}", alg.space.name, module.space.name), basis)?;
    let arity_hi = alg.brackets.len().max(module.actions.len());
    let mut brackets = Vec::new();
    for k in 0..arity_hi {
        let mut map = SymMap::new(&total, None, &total, k, 1);
        if let Some(b) = alg.brackets.get(k) {
            for ((mono, _), value) in b.entries() {
                let mut v = Vector::zero(&total);
                for (i, c) in &value.coeffs {
                    v.add_term(*i, c.clone());
                }
                map.add_entry(&mono.0, None, v)?;
            }
        }
        if k >= 1 {
            if let Some(action) = module.action(k) {
                for ((mono, slot), value) in action.entries() {
                    let e_idx = slot.expect("module actions carry a slot") as usize;
                    let mut inputs = mono.0.clone();
                    inputs.push((a_dim + e_idx) as u32);
                    let mut v = Vector::zero(&total);
                    for (i, c) in &value.coeffs {
                        v.add_term(a_dim + i, c.clone());
                    }
                    map.add_entry(&inputs, None, v)?;
                }
            }
        }
        brackets.push(map);
    }
    LInftyAlgebra::from_brackets(&total, brackets)
}

/// A family `f_k: S^k(L) → L'` of degree 0 maps (`f_0` stored as the arity-0
/// member), the component presentation of a morphism.
#[derive(Clone, Debug)]
pub struct MorphismData {
    pub maps: Vec<SymMap>,
}

impl MorphismData {
    pub fn new(src: &SpaceRef, dst: &SpaceRef, mut maps: Vec<SymMap>) -> Result<Self> {
        maps.sort_by_key(|m| m.arity);
        let mut filled: Vec<SymMap> = Vec::new();
        for m in maps {
            if m.degree != 0 {
                return Err(Error::DegreeMismatch(
                    "morphism components must have degree 0".into(),
                ));
            }
            while filled.len() < m.arity {
                let k = filled.len();
                filled.push(SymMap::new(src, None, dst, k, 0));
            }
            filled.push(m);
        }
        if filled.is_empty() {
            filled.push(SymMap::new(src, None, dst, 0, 0));
        }
        Ok(MorphismData { maps: filled })
    }

    pub fn identity(alg: &LInftyAlgebra) -> Result<Self> {
        let mut f1 = SymMap::new(&alg.space, None, &alg.space, 1, 0);
        for i in 0..alg.space.dim() {
            f1.insert_new(&[i as u32], None, Vector::basis(&alg.space, i))?;
        }
        MorphismData::new(&alg.space, &alg.space, vec![f1])
    }

    pub fn f0(&self) -> Vector<Rat> {
        self.maps[0].eval_basis(&[], None)
    }

    pub fn f_max(&self) -> usize {
        self.maps.len() - 1
    }

    fn eval_f(&self, k: usize, args: &[Vector<Rat>]) -> Result<Vector<Rat>> {
        match self.maps.get(k) {
            Some(m) => m.eval(args, None),
            None => Ok(Vector::zero(&self.maps[0].target)),
        }
    }
}

/// Both verdicts of the morphism check; the two routes are equivalent and
/// must agree.
#[derive(Clone, Debug)]
pub struct MorphismReport {
    pub component_route: CheckReport,
    pub dual_route: CheckReport,
}

impl MorphismReport {
    pub fn agree(&self) -> bool {
        self.component_route.passed() == self.dual_route.passed()
    }
    pub fn passed(&self) -> bool {
        self.component_route.passed() && self.dual_route.passed()
    }
}

/// Checks morphism data two ways: through the component relations, and
/// through the intertwining `φ ∘ Q' = Q ∘ φ` of the dual algebra morphism,
/// compared degreewise up to output weight `n_max`.
pub fn check_morphism(
    f: &MorphismData,
    src: &LInftyAlgebra,
    dst: &LInftyAlgebra,
    n_max: usize,
) -> Result<MorphismReport> {
    Ok(MorphismReport {
        component_route: check_morphism_components(f, src, dst, n_max)?,
        dual_route: check_morphism_dual(f, src, dst, n_max)?,
    })
}

fn check_morphism_components(
    f: &MorphismData,
    src: &LInftyAlgebra,
    dst: &LInftyAlgebra,
    n_max: usize,
) -> Result<CheckReport> {
    let mut report = CheckReport::new("morphism components");
    let f0 = f.f0();

    // constant relation: Σ_{k≥1} (1/k!) λ'_k(f0,…,f0) + λ'_0 = f_1(λ_0)
    let mut lhs = dst.lambda0();
    let mut factorial = rat(1);
    for k in 1..dst.brackets.len() {
        factorial = factorial * rat(k as i64);
        if dst.brackets[k].is_zero() || f0.is_zero() {
            continue;
        }
        let args = vec![f0.clone(); k];
        let term = dst.brackets[k].eval(&args, None)?;
        lhs = lhs.add(&term.scale(&(rat(1) / factorial.clone())));
    }
    let rhs = f.eval_f(1, &[src.lambda0()])?;
    let res0 = lhs.sub(&rhs);
    report.record(res0.is_zero(), || {
        ("constant relation".into(), res0.to_string())
    });

    let all: Vec<u32> = (0..src.space.dim() as u32).collect();
    for n in 1..=n_max {
        for tuple in monomials_of_weight(&src.space, n, &all) {
            let degrees: Vec<i64> = tuple
                .0
                .iter()
                .map(|&u| src.space.degree(u as usize))
                .collect();
            // left side: Σ_{k+l=n} Σ_{σ∈sh(l,k)} ε(σ) f_{k+1}(λ_l(…), …)
            let mut lhs = Vector::zero(&dst.space);
            for l in 0..=n {
                let k = n - l;
                if src.brackets.get(l).map_or(true, |b| b.is_zero()) {
                    continue;
                }
                for sigma in crate::graded::unshuffles(&[l, k]) {
                    let sign = koszul_sign(&sigma, &degrees)?;
                    let inner_tuple: Vec<u32> =
                        sigma.0[..l].iter().map(|&i| tuple.0[i]).collect();
                    let inner = src.brackets[l].eval_basis(&inner_tuple, None);
                    if inner.is_zero() {
                        continue;
                    }
                    let mut args = Vec::with_capacity(k + 1);
                    args.push(inner);
                    for &i in &sigma.0[l..] {
                        args.push(Vector::basis(&src.space, tuple.0[i] as usize));
                    }
                    let val = f.eval_f(k + 1, &args)?;
                    lhs = lhs.add(&val.scale(&sign));
                }
            }
            // right side, over ordered compositions i_1+…+i_r = n:
            // Σ_τ Σ_j (1/(r+j)!) ε(τ) λ'_{r+j}(f0^j, f_{i_1}(…), …, f_{i_r}(…))
            let mut rhs = Vector::zero(&dst.space);
            for composition in compositions(n) {
                let r = composition.len();
                for tau in crate::graded::unshuffles(&composition) {
                    let sign = koszul_sign(&tau, &degrees)?;
                    let mut blocks = Vec::with_capacity(r);
                    let mut offset = 0usize;
                    let mut block_vanishes = false;
                    for &sz in &composition {
                        let block_tuple: Vec<u32> = tau.0[offset..offset + sz]
                            .iter()
                            .map(|&i| tuple.0[i])
                            .collect();
                        offset += sz;
                        let val = match f.maps.get(sz) {
                            Some(m) => m.eval_basis(&block_tuple, None),
                            None => Vector::zero(&dst.space),
                        };
                        if val.is_zero() {
                            block_vanishes = true;
                            break;
                        }
                        blocks.push(val);
                    }
                    if block_vanishes {
                        continue;
                    }
                    for j in 0..dst.brackets.len().saturating_sub(r) {
                        let arity = r + j;
                        if dst.brackets.get(arity).map_or(true, |b| b.is_zero()) {
                            continue;
                        }
                        if j > 0 && f0.is_zero() {
                            continue;
                        }
                        let mut args = vec![f0.clone(); j];
                        args.extend(blocks.iter().cloned());
                        let val = dst.brackets[arity].eval(&args, None)?;
                        let fact = (1..=arity as i64).fold(rat(1), |a, x| a * rat(x));
                        rhs = rhs.add(&val.scale(&(sign.clone() / fact)));
                    }
                }
            }
            let res = lhs.sub(&rhs);
            report.record(res.is_zero(), || {
                (
                    format!("n={} tuple {}", n, tuple_names(&src.space, &tuple.0)),
                    res.to_string(),
                )
            });
        }
    }
    Ok(report)
}

/// Ordered compositions of `n` into parts ≥ 1.
fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for rest in compositions(n - first) {
            let mut c = vec![first];
            c.extend(rest);
            out.push(c);
        }
    }
    out
}

/// The dual algebra morphism `φ = Σ_k (-1)^{k+1} f_k∨` applied to an element
/// of `O(L')`, truncated at output weight `w_max`.
pub fn morphism_dual_apply(
    f: &MorphismData,
    src: &LInftyAlgebra,
    dst: &LInftyAlgebra,
    elem: &Element<Rat>,
    w_max: usize,
) -> Result<Element<Rat>> {
    // generator images φ(ξ) ∈ O(L) for ξ a generator of (L')∨
    let mut gen_images: Vec<Element<Rat>> = Vec::with_capacity(dst.space.dim());
    let all: Vec<u32> = (0..src.space.dim() as u32).collect();
    for g in 0..dst.space.dim() {
        let mut img = Element::zero_plain(&src.dual);
        for (k, fk) in f.maps.iter().enumerate() {
            if fk.is_zero() {
                continue;
            }
            for tuple in monomials_of_weight(&src.space, k, &all) {
                let value = fk.eval_basis(&tuple.0, None);
                let c = value.coeffs.get(&g).cloned().unwrap_or_else(Rat::zero);
                if c.is_zero() {
                    continue;
                }
                let mono = Monomial(tuple.0.clone());
                let mut mono_elem = Element::zero_plain(&src.dual);
                mono_elem.add_term(mono.clone(), 0, rat(1));
                let norm = crate::poly::pair_dual_primal(&src.space, &mono_elem, &tuple.0);
                img.add_term(mono, 0, sign_pow(k as i64 + 1) * c / norm);
            }
        }
        gen_images.push(img);
    }
    // substitute multiplicatively
    let mut out = Element::zero_plain(&src.dual);
    for ((mono, _), c) in &elem.terms {
        let mut acc = Element::zero_plain(&src.dual);
        acc.add_term(Monomial::one(), 0, c.clone());
        for &g in &mono.0 {
            acc = acc
                .mul_plain(&gen_images[g as usize])
                .truncate_weight(w_max);
            if acc.is_zero() {
                break;
            }
        }
        out.add_assign(&acc);
    }
    Ok(out.truncate_weight(w_max))
}

fn check_morphism_dual(
    f: &MorphismData,
    src: &LInftyAlgebra,
    dst: &LInftyAlgebra,
    n_max: usize,
) -> Result<CheckReport> {
    let mut report = CheckReport::new("morphism dual route");
    for g in 0..dst.space.dim() {
        let mut xi = Element::zero_plain(&dst.dual);
        xi.add_term(Monomial(vec![g as u32]), 0, rat(1));
        let lhs = morphism_dual_apply(f, src, dst, &dst.q.apply(&xi), n_max)?;
        let phi_xi = morphism_dual_apply(f, src, dst, &xi, n_max + 1)?;
        let rhs = src.q.apply(&phi_xi).truncate_weight(n_max);
        let res = lhs.sub(&rhs);
        report.record(res.is_zero(), || {
            (
                format!("generator {}", dst.dual.basis[g].name),
                res.to_string(),
            )
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn zero_brackets_pass_jacobi() {
        let space = GradedSpace::uniform("V", &["x", "y"], -1);
        let alg = LInftyAlgebra::from_brackets(&space, vec![]).unwrap();
        assert!(alg.check_jacobi(Exec::Sequential).unwrap().passed());
    }

    #[test]
    fn k_pair_passes_jacobi() {
        let (pair, _) = fixtures::k_pair(1, 2, 3, 5);
        assert!(pair.algebra.check_jacobi(Exec::default()).unwrap().passed());
    }

    #[test]
    fn incompatible_quadratic_bracket_fails_jacobi() {
        let (pair, _) = fixtures::k_pair(1, 2, 3, 5);
        let space = &pair.algebra.space;
        // inject λ_2(a1, b) = b (degree-correct); the mixed λ2/λ3 identities
        // at n = 4 acquire a nonzero residual
        let mut l2 = SymMap::new(space, None, space, 2, 1);
        let mut v = Vector::zero(space);
        v.add_term(2, rat(1));
        l2.insert_new(&[0, 2], None, v).unwrap();
        let mut brackets = pair.algebra.brackets.clone();
        brackets[2] = l2;
        let alg = LInftyAlgebra::from_brackets(space, brackets).unwrap();
        let report = alg.check_jacobi(Exec::Sequential).unwrap();
        assert!(!report.passed());
    }

    #[test]
    fn jacobi_identities_vanish_structurally_beyond_bound() {
        let (pair, _) = fixtures::k_pair(1, 2, 3, 5);
        let alg = &pair.algebra;
        let n = 2 * alg.k_max();
        let all: Vec<u32> = (0..alg.space.dim() as u32).collect();
        for t in monomials_of_weight(&alg.space, n, &all) {
            assert!(alg.jacobi_residual(&t.0).unwrap().is_zero());
        }
    }

    #[test]
    fn endomorphism_algebra_satisfies_jacobi() {
        let e = GradedSpace::new(
            "E",
            vec![
                BasisVector {
                    name: "e0".into(),
                    degree: 0,
                    part: None,
                },
                BasisVector {
                    name: "e1".into(),
                    degree: -1,
                    part: None,
                },
            ],
        )
        .unwrap();
        let alg = endomorphism_algebra(&e).unwrap();
        assert!(alg.check_jacobi(Exec::Sequential).unwrap().passed());
    }

    #[test]
    fn identity_morphism_checks_out_both_ways() {
        let (pair, _) = fixtures::k_pair(2, 3, 1, 1);
        let id = MorphismData::identity(&pair.algebra).unwrap();
        let rep = check_morphism(&id, &pair.algebra, &pair.algebra, 4).unwrap();
        assert!(rep.passed());
        assert!(rep.agree());
    }

    #[test]
    fn invalid_rescaling_fails_both_routes_consistently() {
        let (pair, _) = fixtures::k_pair(1, 1, 2, 5);
        let alg = &pair.algebra;
        let mut f1 = SymMap::new(&alg.space, None, &alg.space, 1, 0);
        f1.insert_new(&[0], None, Vector::basis(&alg.space, 0).scale(&rat(2)))
            .unwrap();
        f1.insert_new(&[1], None, Vector::basis(&alg.space, 1))
            .unwrap();
        f1.insert_new(&[2], None, Vector::basis(&alg.space, 2).scale(&rat(4)))
            .unwrap();
        let f = MorphismData::new(&alg.space, &alg.space, vec![f1]).unwrap();
        let rep = check_morphism(&f, alg, alg, 4).unwrap();
        assert!(!rep.passed());
        assert!(rep.agree(), "the two verdicts must coincide");
    }
}
