//! Sparse polynomial elements of `S(V∨) ⊗ U` with exact coefficients,
//! graded-symmetric monomials, contractions, duality pairings and the
//! algebraic de Rham operator.
//!
//! A [`Monomial`] lives over a fixed "generator" space (always a dual space
//! in practice, e.g. `L∨` or `A∨`); an [`Element`] attaches a coefficient in
//! a second space `U`. Plain polynomials use the one-dimensional scalar
//! space for `U`.

use crate::error::Error;
use crate::graded::{GradedSpace, Part, SpaceRef, Vector};
use crate::scalar::{sign_pow, Rat, Ring};
use crate::Result;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// A canonical graded-symmetric monomial: weakly increasing generator
/// indices, odd-degree generators never repeated.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn weight(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self, space: &GradedSpace) -> i64 {
        self.0.iter().map(|&i| space.degree(i as usize)).sum()
    }

    /// Number of generators tagged with `part`.
    pub fn part_weight(&self, space: &GradedSpace, part: Part) -> usize {
        self.0
            .iter()
            .filter(|&&i| space.basis[i as usize].part == Some(part))
            .count()
    }
}

/// Sorts a generator sequence into canonical order.
///
/// Returns the canonical monomial together with the Koszul sign relating the
/// input order to the canonical order, or `None` when an odd-degree
/// generator repeats (the square of an odd element vanishes).
pub fn normalize_monomial(space: &GradedSpace, seq: &[u32]) -> Option<(Monomial, Rat)> {
    let mut items: Vec<u32> = seq.to_vec();
    // Insertion sort, accumulating the Koszul sign of each adjacent swap.
    let mut sign = Rat::one();
    for i in 1..items.len() {
        let mut j = i;
        while j > 0 && items[j - 1] > items[j] {
            let d1 = space.degree(items[j - 1] as usize);
            let d2 = space.degree(items[j] as usize);
            sign = sign * sign_pow(d1 * d2);
            items.swap(j - 1, j);
            j -= 1;
        }
    }
    for w in items.windows(2) {
        if w[0] == w[1] && space.degree(w[0] as usize) % 2 != 0 {
            return None;
        }
    }
    Some((Monomial(items), sign))
}

/// Enumerates all canonical monomials of the given weight over `space`,
/// optionally restricted to generator indices in `allowed`.
pub fn monomials_of_weight(space: &GradedSpace, weight: usize, allowed: &[u32]) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current: Vec<u32> = Vec::with_capacity(weight);
    fn rec(
        space: &GradedSpace,
        allowed: &[u32],
        weight: usize,
        from: usize,
        current: &mut Vec<u32>,
        out: &mut Vec<Monomial>,
    ) {
        if current.len() == weight {
            out.push(Monomial(current.clone()));
            return;
        }
        for (pos, &g) in allowed.iter().enumerate().skip(from) {
            let odd = space.degree(g as usize) % 2 != 0;
            if odd && current.last() == Some(&g) {
                continue;
            }
            current.push(g);
            rec(space, allowed, weight, pos, current, out);
            current.pop();
        }
    }
    rec(space, allowed, weight, 0, &mut current, &mut out);
    out
}

/// Sparse element of `S(gens) ⊗ coeff`.
#[derive(Clone, Debug, PartialEq)]
pub struct Element<C: Ring = Rat> {
    /// Generator space of the symmetric algebra (a dual space).
    pub gens: SpaceRef,
    /// Coefficient space `U`; the scalar space for plain polynomials.
    pub coeff: SpaceRef,
    pub terms: BTreeMap<(Monomial, u32), C>,
}

impl<C: Ring> Element<C> {
    pub fn zero(gens: &SpaceRef, coeff: &SpaceRef) -> Self {
        Element {
            gens: gens.clone(),
            coeff: coeff.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn zero_plain(gens: &SpaceRef) -> Self {
        Self::zero(gens, &GradedSpace::scalar_space())
    }

    /// The constant polynomial `1 ⊗ u`.
    pub fn constant(gens: &SpaceRef, coeff: &SpaceRef, idx: u32, c: C) -> Self {
        let mut e = Self::zero(gens, coeff);
        e.add_term(Monomial::one(), idx, c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mono: Monomial, idx: u32, c: C) {
        if c.is_zero() {
            return;
        }
        let key = (mono, idx);
        match self.terms.get_mut(&key) {
            Some(entry) => {
                *entry = entry.radd(&c);
                if entry.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    /// Adds `sign·seq⊗idx` after normalization.
    pub fn add_seq(&mut self, seq: &[u32], idx: u32, c: C) {
        if let Some((mono, sign)) = normalize_monomial(&self.gens, seq) {
            self.add_term(mono, idx, c.scale(&sign));
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for ((m, i), c) in &other.terms {
            self.add_term(m.clone(), *i, c.clone());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((m, i), c) in &other.terms {
            out.add_term(m.clone(), *i, c.rneg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&C::one().rneg())
    }

    pub fn scale(&self, by: &C) -> Self {
        let mut out = Self::zero(&self.gens, &self.coeff);
        if by.is_zero() {
            return out;
        }
        for ((m, i), c) in &self.terms {
            out.add_term(m.clone(), *i, c.rmul(by));
        }
        out
    }

    pub fn scale_rat(&self, by: &Rat) -> Self {
        let mut out = Self::zero(&self.gens, &self.coeff);
        for ((m, i), c) in &self.terms {
            out.add_term(m.clone(), *i, c.scale(by));
        }
        out
    }

    /// Total degree of a term: monomial degree plus coefficient degree.
    pub fn term_degree(&self, mono: &Monomial, idx: u32) -> i64 {
        mono.degree(&self.gens) + self.coeff.degree(idx as usize)
    }

    /// Degree when homogeneous.
    pub fn homogeneous_degree(&self) -> Result<Option<i64>> {
        let mut deg = None;
        for (m, i) in self.terms.keys() {
            let d = self.term_degree(m, *i);
            match deg {
                None => deg = Some(d),
                Some(p) if p != d => {
                    return Err(Error::DegreeMismatch(format!(
                        "element mixes total degrees {} and {}",
                        p, d
                    )))
                }
                _ => {}
            }
        }
        Ok(deg)
    }

    /// Maximum monomial weight appearing.
    pub fn max_weight(&self) -> usize {
        self.terms.keys().map(|(m, _)| m.weight()).max().unwrap_or(0)
    }

    /// Drops terms of monomial weight exceeding `n`.
    pub fn truncate_weight(&self, n: usize) -> Self {
        let mut out = Self::zero(&self.gens, &self.coeff);
        for ((m, i), c) in &self.terms {
            if m.weight() <= n {
                out.add_term(m.clone(), *i, c.clone());
            }
        }
        out
    }

    /// The scalar part (weight-zero term) of a plain polynomial.
    pub fn scalar_part(&self) -> C {
        self.terms
            .get(&(Monomial::one(), 0))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    /// Left-multiplies by a plain polynomial: `ω · (m ⊗ u) = (ω⊙m) ⊗ u`.
    pub fn mul_plain_left(&self, plain: &Element<C>) -> Self {
        let mut out = Self::zero(&self.gens, &self.coeff);
        for ((pm, _), pc) in &plain.terms {
            for ((m, i), c) in &self.terms {
                let mut seq = pm.0.clone();
                seq.extend_from_slice(&m.0);
                if let Some((mono, sign)) = normalize_monomial(&self.gens, &seq) {
                    out.add_term(mono, *i, pc.rmul(c).scale(&sign));
                }
            }
        }
        out
    }

    /// Product of plain polynomials.
    pub fn mul_plain(&self, other: &Element<C>) -> Self {
        other.mul_plain_left(self)
    }

    /// Right contraction by the basis vector `v` (primal index into the
    /// space whose dual is `gens`): acts on the monomial factor, the
    /// coefficient slot is untouched.
    ///
    /// On generators `ξ∟v = ξ(v)`; on products
    /// `(ξ⊙η)∟v = (-1)^{|v||η|}(ξ∟v)⊙η + ξ⊙(η∟v)`.
    pub fn contract_right(&self, v: u32, vdeg: i64) -> Self {
        let mut out = Self::zero(&self.gens, &self.coeff);
        for ((m, i), c) in &self.terms {
            for (pos, &g) in m.0.iter().enumerate() {
                if g != v {
                    continue;
                }
                // sign: v moves past the generators to the right of pos.
                let trailing: i64 = m.0[pos + 1..]
                    .iter()
                    .map(|&x| self.gens.degree(x as usize))
                    .sum();
                let sign = sign_pow(vdeg * trailing);
                let mut rest = m.0.clone();
                rest.remove(pos);
                out.add_term(Monomial(rest), *i, c.scale(&sign));
            }
        }
        out
    }

    /// Left contraction `ι_v`, the degree-`|v|` derivation with
    /// `ι_v ξ = (-1)^{|ξ||v|} ξ(v)` on generators.
    pub fn contract_left(&self, v: u32, vdeg: i64) -> Self {
        let mut out = Self::zero(&self.gens, &self.coeff);
        for ((m, i), c) in &self.terms {
            let mut passed: i64 = 0;
            for (pos, &g) in m.0.iter().enumerate() {
                let gdeg = self.gens.degree(g as usize);
                if g == v {
                    // ι_v(ξ) = (-1)^{|ξ||v|} with |ξ| = -|v|.
                    let own = sign_pow(-vdeg * vdeg);
                    let sign = sign_pow(vdeg * passed) * own;
                    let mut rest = m.0.clone();
                    rest.remove(pos);
                    out.add_term(Monomial(rest), *i, c.scale(&sign));
                }
                passed += gdeg;
            }
        }
        out
    }

    /// Keeps only terms whose monomial is purely in the given part.
    pub fn restrict_part(&self, part: Part) -> Self {
        let mut out = Self::zero(&self.gens, &self.coeff);
        for ((m, i), c) in &self.terms {
            if m.0
                .iter()
                .all(|&g| self.gens.basis[g as usize].part == Some(part))
            {
                out.add_term(m.clone(), *i, c.clone());
            }
        }
        out
    }

    /// Converts the coefficient slot through `map: (old index) -> (new index, sign)`.
    pub fn map_coeff(&self, new_coeff: &SpaceRef, map: impl Fn(u32) -> (u32, Rat)) -> Self {
        let mut out = Self::zero(&self.gens, new_coeff);
        for ((m, i), c) in &self.terms {
            let (j, sign) = map(*i);
            out.add_term(m.clone(), j, c.scale(&sign));
        }
        out
    }

    /// Re-interprets over another generator space with identical indexing.
    pub fn cast_gens(&self, gens: &SpaceRef) -> Self {
        let mut out = Element::zero(gens, &self.coeff);
        for ((m, i), c) in &self.terms {
            debug_assert!(m
                .0
                .iter()
                .all(|&g| gens.degree(g as usize) == self.gens.degree(g as usize)));
            out.add_term(m.clone(), *i, c.clone());
        }
        out
    }

    /// Extracts the vector part of a constant (weight-zero) element.
    pub fn constant_vector(&self) -> Vector<C> {
        let mut v = Vector::zero(&self.coeff);
        for ((m, i), c) in &self.terms {
            if m.weight() == 0 {
                v.add_term(*i as usize, c.clone());
            }
        }
        v
    }
}

impl Element<Rat> {
    /// Lifts rational coefficients into any rational algebra.
    pub fn lift<C: Ring>(&self) -> Element<C> {
        let mut out = Element::zero(&self.gens, &self.coeff);
        for ((m, i), c) in &self.terms {
            out.add_term(m.clone(), *i, C::from_rat(c.clone()));
        }
        out
    }
}

impl Element<crate::scalar::Dual> {
    /// Splits a dual-number element into its body and soul parts.
    pub fn body_soul(&self) -> (Element<Rat>, Element<Rat>) {
        let mut body = Element::zero(&self.gens, &self.coeff);
        let mut soul = Element::zero(&self.gens, &self.coeff);
        for ((m, i), c) in &self.terms {
            body.add_term(m.clone(), *i, c.body.clone());
            soul.add_term(m.clone(), *i, c.soul.clone());
        }
        (body, soul)
    }
}

impl<C: Ring> fmt::Display for Element<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let trivial_coeff = self.coeff.dim() == 1 && self.coeff.basis[0].name == "1";
        let mut first = true;
        for ((m, i), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", c)?;
            for &g in &m.0 {
                write!(f, "⊙{}", self.gens.basis[g as usize].name)?;
            }
            if !trivial_coeff {
                write!(f, "⊗{}", self.coeff.basis[*i as usize].name)?;
            }
        }
        Ok(())
    }
}

/// Pairing `⟨v_1⊙…⊙v_p, ξ-monomial⟩ = ι_{v_1}(… ι_{v_p}(ξ-monomial) …)`
/// between a primal tuple and a dual monomial (`gens` = dual of the tuple's
/// space, with matching index order). Zero unless the index multisets agree.
pub fn pair_primal_dual(
    primal: &GradedSpace,
    tuple: &[u32],
    dual_mono: &Element<Rat>,
) -> Rat {
    let mut acc = dual_mono.clone();
    // innermost contraction is by the *last* tuple entry
    for &v in tuple.iter().rev() {
        acc = acc.contract_left(v, primal.degree(v as usize));
        if acc.is_zero() {
            return Rat::zero();
        }
    }
    acc.scalar_part()
}

/// Pairing with the dual side first:
/// `⟨ξ's, v's⟩ = (-1)^{(Σ|v|)(Σ|ξ|)} ⟨v's, ξ's⟩`.
pub fn pair_dual_primal(primal: &GradedSpace, dual_mono: &Element<Rat>, tuple: &[u32]) -> Rat {
    let vdeg: i64 = tuple.iter().map(|&v| primal.degree(v as usize)).sum();
    // Σ|ξ| = -Σ|v| on any nonvanishing pairing.
    pair_primal_dual(primal, tuple, dual_mono) * sign_pow(vdeg * vdeg)
}

/// Single-monomial variants.
pub fn pair_mono_primal_dual(primal: &GradedSpace, tuple: &[u32], gens: &SpaceRef, m: &Monomial) -> Rat {
    let mut e = Element::zero_plain(gens);
    e.add_term(m.clone(), 0, Rat::one());
    pair_primal_dual(primal, tuple, &e)
}

/// The de Rham operator on a plain monomial:
/// `I(ξ^1⊙…⊙ξ^w) = Σ_j (-1)^{|ξ^j|·(|ξ^{j+1}|+…+|ξ^w|)} (ξ's minus j) ⊗ ξ^j`,
/// extended to coefficients as `I ⊗ 1` (the extracted slot stays left of the
/// coefficient). The result lives in `S(gens) ⊗ (gens ⊗ coeff)`.
pub fn de_rham<C: Ring>(elem: &Element<C>, slot_coeff: &SpaceRef) -> Element<C> {
    let out_coeff = elem.gens.tensor(&elem.coeff);
    debug_assert_eq!(out_coeff.dim(), slot_coeff.dim());
    let mut out = Element::zero(&elem.gens, slot_coeff);
    for ((m, i), c) in &elem.terms {
        for (pos, &g) in m.0.iter().enumerate() {
            let gdeg = elem.gens.degree(g as usize);
            let trailing: i64 = m.0[pos + 1..]
                .iter()
                .map(|&x| elem.gens.degree(x as usize))
                .sum();
            let sign = sign_pow(gdeg * trailing);
            let mut rest = m.0.clone();
            rest.remove(pos);
            let idx = (g as usize) * elem.coeff.dim() + (*i as usize);
            out.add_term(Monomial(rest), idx as u32, c.scale(&sign));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::BasisVector;
    use crate::scalar::rat;

    fn space() -> (SpaceRef, SpaceRef) {
        // primal: a0,a1 degree -1; c degree 0
        let primal = GradedSpace::new(
            "V",
            vec![
                BasisVector { name: "a0".into(), degree: -1, part: None },
                BasisVector { name: "a1".into(), degree: -1, part: None },
                BasisVector { name: "c".into(), degree: 0, part: None },
            ],
        )
        .unwrap();
        let dual = primal.dual();
        (primal, dual)
    }

    #[test]
    fn normalize_examples() {
        let (_, dual) = space();
        // (a1∨, a0∨), both degree 1 → sorted with sign -1
        let (m, s) = normalize_monomial(&dual, &[1, 0]).unwrap();
        assert_eq!(m, Monomial(vec![0, 1]));
        assert_eq!(s, rat(-1));
        // odd square vanishes
        assert!(normalize_monomial(&dual, &[0, 0]).is_none());
        // even square allowed
        let (m, s) = normalize_monomial(&dual, &[2, 2]).unwrap();
        assert_eq!(m, Monomial(vec![2, 2]));
        assert_eq!(s, rat(1));
        // idempotent on sorted input
        let (_, s) = normalize_monomial(&dual, &[0, 1, 2]).unwrap();
        assert_eq!(s, rat(1));
    }

    #[test]
    fn pairing_oracle_small_cases() {
        let (primal, dual) = space();
        // ⟨a0, a0∨⟩ = ι_{a0}(a0∨) = (-1)^{|a0∨||a0|} = -1
        let mut e = Element::zero_plain(&dual);
        e.add_term(Monomial(vec![0]), 0, rat(1));
        assert_eq!(pair_primal_dual(&primal, &[0], &e), rat(-1));
        // dual-first: ⟨a0∨, a0⟩ = ξ(v) = +1
        assert_eq!(pair_dual_primal(&primal, &e, &[0]), rat(1));
        // ⟨a0⊙a1, a0∨⊙a1∨⟩ = -1 (hand expansion)
        let mut e2 = Element::zero_plain(&dual);
        e2.add_term(Monomial(vec![0, 1]), 0, rat(1));
        assert_eq!(pair_primal_dual(&primal, &[0, 1], &e2), rat(-1));
        // distinct multisets pair to zero
        assert_eq!(pair_primal_dual(&primal, &[0, 0], &e2), rat(0));
        // even generator repetition: ⟨c⊙c, c∨⊙c∨⟩ = 2 (two Leibniz routes)
        let mut e3 = Element::zero_plain(&dual);
        e3.add_term(Monomial(vec![2, 2]), 0, rat(1));
        assert_eq!(pair_primal_dual(&primal, &[2, 2], &e3), rat(2));
    }

    /// Independent oracle: the iterated-contraction pairing expands as a sum
    /// over bijective matchings `μ` (tuple entry i consumed by monomial slot
    /// μ(i)) with sign
    /// `Π_i (-1)^{|v_i|} · Π_{l<i, μ(l)<μ(i)} (-1)^{|v_l||v_i|}`.
    fn pairing_by_matchings(primal: &GradedSpace, tuple: &[u32], mono: &Monomial) -> Rat {
        let n = tuple.len();
        if mono.0.len() != n {
            return Rat::zero();
        }
        let mut total = Rat::zero();
        let mut assignment: Vec<usize> = Vec::with_capacity(n);
        let mut used = vec![false; n];
        fn rec(
            primal: &GradedSpace,
            tuple: &[u32],
            mono: &Monomial,
            assignment: &mut Vec<usize>,
            used: &mut Vec<bool>,
            total: &mut Rat,
        ) {
            let i = assignment.len();
            if i == tuple.len() {
                let mut sign = Rat::one();
                for (a, &va) in tuple.iter().enumerate() {
                    sign = sign * sign_pow(primal.degree(va as usize));
                    for l in 0..a {
                        if assignment[l] < assignment[a] {
                            sign = sign
                                * sign_pow(
                                    primal.degree(tuple[l] as usize)
                                        * primal.degree(va as usize),
                                );
                        }
                    }
                }
                *total = total.clone() + sign;
                return;
            }
            for slot in 0..tuple.len() {
                if !used[slot] && mono.0[slot] == tuple[i] {
                    used[slot] = true;
                    assignment.push(slot);
                    rec(primal, tuple, mono, assignment, used, total);
                    assignment.pop();
                    used[slot] = false;
                }
            }
        }
        rec(primal, tuple, mono, &mut assignment, &mut used, &mut total);
        total
    }

    #[test]
    fn pairing_matches_matching_oracle() {
        let (primal, dual) = space();
        let cases: Vec<Vec<u32>> = vec![
            vec![0],
            vec![0, 1],
            vec![1, 0],
            vec![0, 2],
            vec![2, 2],
            vec![0, 1, 2],
            vec![0, 2, 2],
        ];
        for tuple in cases {
            if let Some((mono, _)) = normalize_monomial(&dual, &tuple) {
                let mut e = Element::zero_plain(&dual);
                e.add_term(mono.clone(), 0, rat(1));
                let mine = pair_primal_dual(&primal, &tuple, &e);
                let oracle = pairing_by_matchings(&primal, &tuple, &mono);
                assert_eq!(mine, oracle, "tuple {:?}", tuple);
            }
        }
    }

    #[test]
    fn de_rham_is_a_bimodule_derivation() {
        let (_, dual) = space();
        // I(ξ⊙η) on a0∨⊙a1∨: ξ⊗η + (-1)^{|ξ||η|} η⊗ξ
        let mut e = Element::zero_plain(&dual);
        e.add_term(Monomial(vec![0, 1]), 0, rat(1));
        let slot = dual.tensor(&GradedSpace::scalar_space());
        let i = de_rham(&e, &slot);
        // expect: (a0∨)⊗slot(a1∨) + (-1)^{1·1}(a1∨)⊗slot(a0∨)
        let mut expect = Element::zero(&dual, &slot);
        expect.add_term(Monomial(vec![0]), 1, rat(1));
        expect.add_term(Monomial(vec![1]), 0, rat(-1));
        assert_eq!(i, expect);
    }

    #[test]
    fn contractions_satisfy_leibniz() {
        let (primal, dual) = space();
        // ι_v(ξ⊙η) vs Leibniz on a0∨⊙c∨, v = c
        let mut e = Element::zero_plain(&dual);
        e.add_term(Monomial(vec![0, 2]), 0, rat(1));
        let lhs = e.contract_left(2, primal.degree(2));
        let mut expect = Element::zero_plain(&dual);
        // ι_c(a0∨)⊙c∨ = 0; (-1)^{|c||a0∨|} a0∨⊙ι_c(c∨) = a0∨·(+1)
        expect.add_term(Monomial(vec![0]), 0, rat(1));
        assert_eq!(lhs, expect);
        // right contraction: (a0∨⊙c∨)∟a0 = (-1)^{|a0||c∨|}(a0∨∟a0)⊙c∨ = c∨
        let rhs = e.contract_right(0, primal.degree(0));
        let mut expect_r = Element::zero_plain(&dual);
        expect_r.add_term(Monomial(vec![2]), 0, rat(1));
        assert_eq!(rhs, expect_r);
    }
}
