//! The poset of pairs `(p, k)` whose order ideals biject with increasing labelings.
//!
//! Pairs are listed by base element, then by ascending label, so ideal
//! bitstrings are stable. Within one base element larger labels sit lower.
//! An ideal `I` corresponds to the labeling `f(p) = min{k : (p, k) in I}`,
//! falling back to `max R(p)`; larger ideals give pointwise smaller labelings.

use std::collections::HashMap;

use crate::bits::ElemSet;
use crate::error::{Error, Result};
use crate::iso;
use crate::labelings::{induced_restriction, Labeling, LabelingSpace, RestrictionFunction, Strictness};
use crate::poset::{OrderIdeal, Poset};
use crate::toggles::ToggleOrder;

#[derive(Debug, Clone)]
pub struct GammaPoset {
    poset: Poset,
    space: LabelingSpace,
    pairs: Vec<(usize, i32)>,
    index: HashMap<(usize, i32), usize>,
}

/// `Γ(P, R)` for a strictly consistent restriction.
pub fn build_gamma(poset: &Poset, r: &RestrictionFunction) -> Result<GammaPoset> {
    GammaPoset::new(LabelingSpace::new(poset.clone(), r.clone(), Strictness::Strict)?)
}

/// `Γ(P, q)`, built on the induced interval restriction.
pub fn build_gamma_q(poset: &Poset, q: i32) -> Result<GammaPoset> {
    build_gamma(poset, &induced_restriction(poset, q)?)
}

/// `Γ'(P, R)` for weak labelings and a weakly consistent restriction.
pub fn build_gamma_weak(poset: &Poset, r: &RestrictionFunction) -> Result<GammaPoset> {
    GammaPoset::new(LabelingSpace::new(poset.clone(), r.clone(), Strictness::Weak)?)
}

impl GammaPoset {
    pub fn new(space: LabelingSpace) -> Result<Self> {
        space.require_consistent()?;
        let base = space.poset();
        let r = space.restriction();
        let mut pairs = Vec::new();
        for p in 0..base.len() {
            pairs.extend(r.starred(p).iter().map(|&k| (p, k)));
        }
        let index: HashMap<(usize, i32), usize> = pairs.iter().enumerate().map(|(i, &pk)| (pk, i)).collect();
        let names = pairs.iter().map(|&(p, k)| format!("({},{})", base.name(p), k)).collect();
        let covers = defined_covers(&space, &index);
        let poset = Poset::from_index_covers(names, &covers)?;
        Ok(Self {
            poset,
            space,
            pairs,
            index,
        })
    }

    /// The pair poset itself.
    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn space(&self) -> &LabelingSpace {
        &self.space
    }

    pub fn base(&self) -> &Poset {
        self.space.poset()
    }

    pub fn restriction(&self) -> &RestrictionFunction {
        self.space.restriction()
    }

    pub fn strictness(&self) -> Strictness {
        self.space.strictness()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(usize, i32)] {
        &self.pairs
    }

    pub fn pair(&self, i: usize) -> (usize, i32) {
        self.pairs[i]
    }

    pub fn index_of(&self, p: usize, k: i32) -> Option<usize> {
        self.index.get(&(p, k)).copied()
    }

    /// The omitted pair `(p, max R(p))` for each base element, drawn under its chain.
    pub fn ghosts(&self) -> Vec<(usize, i32)> {
        (0..self.base().len()).map(|p| (p, self.restriction().max(p))).collect()
    }

    /// Covers as pairs of `(element, label)`.
    pub fn cover_pairs(&self) -> Vec<((usize, i32), (usize, i32))> {
        self.poset
            .covers()
            .into_iter()
            .map(|(a, b)| (self.pairs[a], self.pairs[b]))
            .collect()
    }

    /// `H(p, k) = k`: the slice at level `k` mirrors the involution that moves label `k`.
    pub fn toggle_order(&self) -> ToggleOrder {
        ToggleOrder::new(&self.poset, self.pairs.iter().map(|&(_, k)| k as i64).collect())
            .expect("labels strictly change across every cover")
    }

    pub fn ideal_to_labeling(&self, ideal: &OrderIdeal) -> Result<Labeling> {
        self.set_to_labeling(ideal.as_set())
    }

    pub fn set_to_labeling(&self, set: &ElemSet) -> Result<Labeling> {
        if !self.poset.is_order_ideal(set) {
            let culprit = set
                .iter()
                .find(|&i| !self.poset.down_set(i).is_subset(set))
                .map(|i| self.poset.name(i).to_string())
                .unwrap_or_default();
            return Err(Error::NotAnIdeal(culprit));
        }
        Ok(self.labeling_of_set_unchecked(set))
    }

    pub(crate) fn labeling_of_set_unchecked(&self, set: &ElemSet) -> Labeling {
        let mut f = self.space.top();
        for i in set.iter() {
            let (p, k) = self.pairs[i];
            f.0[p] = f.0[p].min(k);
        }
        f
    }

    pub fn labeling_to_ideal(&self, f: &Labeling) -> Result<OrderIdeal> {
        self.space.check(f)?;
        Ok(self.labeling_to_ideal_unchecked(f))
    }

    pub(crate) fn labeling_to_ideal_unchecked(&self, f: &Labeling) -> OrderIdeal {
        let set = ElemSet::from_indices(
            self.len(),
            self.pairs.iter().enumerate().filter(|(_, &(p, k))| k >= f.get(p)).map(|(i, _)| i),
        );
        OrderIdeal::from_set_unchecked(set)
    }

    /// Covers of the simplified rule for interval restrictions:
    /// `(p, k+1) < (p, k)` and `(p1, k-1) < (p2, k)` whenever `p1 < p2` is a cover.
    /// `None` unless every `R(p)` is an interval.
    pub fn interval_rule_covers(&self) -> Option<Vec<(usize, usize)>> {
        let base = self.base();
        let r = self.restriction();
        if !(0..base.len()).all(|p| r.is_interval(p)) {
            return None;
        }
        let shift = self.strictness().gap();
        let mut covers = Vec::new();
        for (i, &(p, k)) in self.pairs.iter().enumerate() {
            if let Some(j) = self.index_of(p, k + 1) {
                covers.push((j, i));
            }
            for &l in base.lower_covers(p) {
                if let Some(j) = self.index_of(l, k - shift) {
                    covers.push((j, i));
                }
            }
        }
        covers.sort_unstable();
        Some(covers)
    }
}

/// Covers read directly off the definition: a chain per base element plus,
/// across each base cover, the pairs whose labels are adjacent options.
fn defined_covers(space: &LabelingSpace, index: &HashMap<(usize, i32), usize>) -> Vec<(usize, usize)> {
    let base = space.poset();
    let r = space.restriction();
    let strict = space.strictness();
    let mut covers = Vec::new();
    for p in 0..base.len() {
        for w in r.starred(p).windows(2) {
            covers.push((index[&(p, w[1])], index[&(p, w[0])]));
        }
    }
    for (p1, p2) in base.covers() {
        for &k2 in r.starred(p2) {
            let Some(k1) = r.below(p1, k2, strict) else {
                continue;
            };
            if k1 == r.max(p1) {
                continue;
            }
            let next = r.next_above(p2, k2).expect("k2 is not the maximum");
            if r.below(p1, next, strict) == Some(k1) {
                continue;
            }
            covers.push((index[&(p1, k1)], index[&(p2, k2)]));
        }
    }
    covers.sort_unstable();
    covers
}

/// An explicit order isomorphism between two posets, checked on construction.
#[derive(Debug, Clone)]
pub struct Isomorphism {
    pub source: Poset,
    pub target: Poset,
    pub map: Vec<usize>,
}

impl Isomorphism {
    fn checked(source: Poset, target: Poset, map: Vec<usize>) -> Option<Self> {
        iso::is_isomorphism(&source, &target, &map).then_some(Self { source, target, map })
    }

    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.map.len()];
        for (a, &b) in self.map.iter().enumerate() {
            inv[b] = a;
        }
        inv
    }
}

/// Under the λ chain condition, `Γ(P, q) ≅ P × [q - rk(P)]` where `rk(P)` is
/// the number of elements in a longest chain.
pub fn lambda_chain_product_iso(poset: &Poset, q: i32) -> Result<Isomorphism> {
    let (deltas, nus) = (poset.deltas(), poset.nus());
    let height = poset.height();
    for p in 0..poset.len() {
        let found = deltas[p] + nus[p] + 1;
        if found != height {
            return Err(Error::LambdaChainViolation {
                element: poset.name(p).to_string(),
                found,
                expected: height,
            });
        }
    }
    let gamma = build_gamma_q(poset, q)?;
    let m = (q as usize).saturating_sub(height);
    let product = poset.cartesian_product(&Poset::chain(m));
    // The top label of p's range is q - nu(p) = q - height + 1 + delta(p).
    let map = gamma
        .pairs()
        .iter()
        .map(|&(p, k)| {
            let c = q - k + deltas[p] as i32 - (height as i32 - 1);
            p * m + (c - 1) as usize
        })
        .collect();
    Isomorphism::checked(gamma.poset().clone(), product, map)
        .ok_or_else(|| Error::RelationViolation("chain-product map does not preserve covers".into()))
}

/// For ranked `P`, `Γ(P, q)` is the subposet of `P × ℤ` on pairs `(p, j)` with
/// `j` in `[ν(p) + rk(p) + 1, q − δ(p) + rk(p) − 1]`, via `(p, k) ↦ (p, q − k + rk(p))`.
pub fn product_line_embedding(poset: &Poset, q: i32) -> Result<Isomorphism> {
    let rk = poset.rank_function().ok_or(Error::NotRanked)?;
    let (deltas, nus) = (poset.deltas(), poset.nus());
    let gamma = build_gamma_q(poset, q)?;
    let mut points = Vec::new();
    for p in 0..poset.len() {
        let lo = nus[p] as i64 + rk.get(p) + 1;
        let hi = q as i64 - deltas[p] as i64 + rk.get(p) - 1;
        points.extend((lo..=hi).map(|j| (p, j)));
    }
    let names = points.iter().map(|&(p, j)| format!("({},{})", poset.name(p), j)).collect();
    let sub = Poset::from_relation(names, |a, b| {
        let ((pa, ja), (pb, jb)) = (points[a], points[b]);
        poset.le(pa, pb) && ja <= jb
    })?;
    let lookup: HashMap<(usize, i64), usize> = points.iter().enumerate().map(|(i, &pj)| (pj, i)).collect();
    let map = gamma
        .pairs()
        .iter()
        .map(|&(p, k)| lookup.get(&(p, q as i64 - k as i64 + rk.get(p))).copied())
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::RelationViolation("pair lands outside the strip".into()))?;
    Isomorphism::checked(gamma.poset().clone(), sub, map)
        .ok_or_else(|| Error::RelationViolation("strip map does not preserve covers".into()))
}

/// For ranked `P`, `Γ(P, R₂ + rk) ≅ Γ'(P, R₂)` via `(p, k) ↦ (p, k − rk(p))`.
pub fn rank_shift_iso(poset: &Poset, weak: &RestrictionFunction) -> Result<Isomorphism> {
    let rk = poset.rank_function().ok_or(Error::NotRanked)?;
    let strict_r = weak.shifted(rk.values());
    let strict = build_gamma(poset, &strict_r)?;
    let weak = build_gamma_weak(poset, weak)?;
    let map = strict
        .pairs()
        .iter()
        .map(|&(p, k)| weak.index_of(p, k - rk.get(p) as i32))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::RelationViolation("shifted pair missing".into()))?;
    Isomorphism::checked(strict.poset().clone(), weak.poset().clone(), map)
        .ok_or_else(|| Error::RelationViolation("rank shift does not preserve covers".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn figure_one() -> (Poset, RestrictionFunction) {
        let p = Poset::new(
            ["a", "b", "c", "d", "e"],
            [("a", "b"), ("a", "c"), ("c", "d"), ("d", "e"), ("b", "e")],
        )
        .unwrap();
        let r = RestrictionFunction::new(
            &p,
            vec![vec![1, 4], vec![2, 3, 5], vec![2, 4, 5], vec![3, 4, 5, 6], vec![4, 6, 7, 9]],
        )
        .unwrap();
        (p, r)
    }

    fn named(g: &GammaPoset) -> Vec<(String, String)> {
        g.cover_pairs()
            .into_iter()
            .map(|((p1, k1), (p2, k2))| (format!("{}{}", g.base().name(p1), k1), format!("{}{}", g.base().name(p2), k2)))
            .collect()
    }

    /// Order on meet irreducibles: `(a) <= (b)` iff `MI(b) <= MI(a)` pointwise.
    fn meet_irreducible_covers(space: &LabelingSpace) -> Vec<((usize, i32), (usize, i32))> {
        let mi = space.meet_irreducibles().unwrap().pairs;
        let n = mi.len();
        let lt = |a: usize, b: usize| a != b && mi[b].1.le_pointwise(&mi[a].1);
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if lt(a, b) && !(0..n).any(|c| lt(a, c) && lt(c, b)) {
                    out.push((mi[a].0, mi[b].0));
                }
            }
        }
        out.sort_unstable();
        out
    }

    #[test]
    fn figure_one_covers() {
        let (p, r) = figure_one();
        let g = build_gamma(&p, &r).unwrap();
        assert_eq!(g.len(), 11);
        assert!(g.poset().dropped_covers().is_empty());
        let covers = named(&g);
        for (lo, hi) in [
            ("a1", "b3"),
            ("a1", "c4"),
            ("c2", "d4"),
            ("c4", "d5"),
            ("b3", "e4"),
            ("d5", "e6"),
            ("d3", "e4"),
            ("b3", "b2"),
            ("c4", "c2"),
        ] {
            assert!(covers.contains(&(lo.to_string(), hi.to_string())), "{lo} < {hi}");
        }
        assert!(!covers.contains(&("a1".to_string(), "b2".to_string())));
        assert_eq!(covers.len(), 13);
        assert_eq!(g.ghosts().len(), 5);
    }

    #[test]
    fn covers_match_meet_irreducible_order() {
        let (p, r) = figure_one();
        let g = build_gamma(&p, &r).unwrap();
        let mut ours = g.cover_pairs();
        ours.sort_unstable();
        assert_eq!(ours, meet_irreducible_covers(g.space()));
    }

    #[test]
    fn singleton_chain() {
        let p = Poset::chain(1);
        let r = RestrictionFunction::new(&p, vec![vec![1, 2, 3]]).unwrap();
        let g = build_gamma(&p, &r).unwrap();
        assert_eq!(g.cover_pairs(), vec![((0, 2), (0, 1))]);
    }

    #[test]
    fn figure_four_and_pentagon_sizes() {
        let p = Poset::new(["a", "b", "c", "d", "e"], [("a", "d"), ("a", "c"), ("c", "e"), ("b", "e")]).unwrap();
        let g = build_gamma_q(&p, 5).unwrap();
        assert_eq!(g.len(), 12);
        assert_eq!(g.interval_rule_covers().unwrap(), g.poset().covers());
        let names: Vec<String> = g.ghosts().iter().map(|&(p, k)| format!("{}{}", g.base().name(p), k)).collect();
        assert_eq!(names, ["a3", "b4", "c4", "d5", "e5"]);
        let covers = named(&g);
        for (lo, hi) in [("a2", "d3"), ("a2", "c3"), ("c3", "e4"), ("b3", "e4")] {
            assert!(covers.contains(&(lo.to_string(), hi.to_string())));
        }

        let (pent, _) = figure_one();
        let g = build_gamma_q(&pent, 6).unwrap();
        assert_eq!(g.len(), 11);
        assert_eq!(g.interval_rule_covers().unwrap(), g.poset().covers());
    }

    #[test]
    fn chain_at_its_own_length_is_empty() {
        let g = build_gamma_q(&Poset::chain(4), 4).unwrap();
        assert!(g.is_empty());
        assert_eq!(g.poset().order_ideals().len(), 1);
    }

    #[test]
    fn bijection_round_trips() {
        let (p, r) = figure_one();
        let g = build_gamma(&p, &r).unwrap();
        let ideals = g.poset().order_ideals();
        let labelings = g.space().enumerate();
        assert_eq!(ideals.len(), labelings.len());
        for f in &labelings {
            let i = g.labeling_to_ideal(f).unwrap();
            assert_eq!(&g.ideal_to_labeling(&i).unwrap(), f);
        }
        for i in &ideals {
            let f = g.ideal_to_labeling(i).unwrap();
            assert_eq!(&g.labeling_to_ideal(&f).unwrap(), i);
        }
        assert_eq!(g.ideal_to_labeling(&g.poset().empty_ideal()).unwrap(), g.space().top());
        assert_eq!(g.ideal_to_labeling(&g.poset().full_ideal()).unwrap(), g.space().bottom());
    }

    #[test]
    fn figure_one_shaded_ideal() {
        let (p, r) = figure_one();
        let g = build_gamma(&p, &r).unwrap();
        let f = Labeling(vec![1, 2, 4, 5, 7]);
        let ideal = g.labeling_to_ideal(&f).unwrap();
        let names: Vec<&str> = ideal.iter().map(|i| g.poset().name(i)).collect();
        assert_eq!(names, ["(a,1)", "(b,2)", "(b,3)", "(c,4)", "(d,5)", "(e,7)"]);
        assert!(matches!(
            g.labeling_to_ideal(&Labeling(vec![1, 2, 4, 5, 8])),
            Err(Error::InvalidLabeling(_))
        ));
    }

    #[test]
    fn larger_ideals_give_smaller_labelings() {
        let (p, r) = figure_one();
        let g = build_gamma(&p, &r).unwrap();
        let ideals = g.poset().order_ideals();
        for i in &ideals {
            for j in &ideals {
                let sub = i.as_set().is_subset(j.as_set());
                let (fi, fj) = (g.ideal_to_labeling(i).unwrap(), g.ideal_to_labeling(j).unwrap());
                assert_eq!(sub, fj.le_pointwise(&fi));
            }
        }
    }

    #[test]
    fn not_an_ideal_is_rejected() {
        let (p, r) = figure_one();
        let g = build_gamma(&p, &r).unwrap();
        let b2 = g.index_of(1, 2).unwrap();
        let set = ElemSet::from_indices(g.len(), [b2]);
        assert_eq!(g.set_to_labeling(&set), Err(Error::NotAnIdeal("(b,2)".into())));
    }

    #[test]
    fn weak_gamma_matches_meet_irreducibles() {
        let p = Poset::chain(2);
        let r = RestrictionFunction::constant(&p, 1, 2).unwrap();
        let g = build_gamma_weak(&p, &r).unwrap();
        assert_eq!(g.space().enumerate().len(), 3);
        let mut ours = g.cover_pairs();
        ours.sort_unstable();
        assert_eq!(ours, meet_irreducible_covers(g.space()));
        assert_eq!(g.poset().count_order_ideals(), 3);

        let anti = Poset::antichain(2);
        let g = build_gamma_weak(&anti, &RestrictionFunction::constant(&anti, 1, 2).unwrap()).unwrap();
        assert_eq!(g.len(), 2);
        assert!(g.poset().covers().is_empty());
    }

    #[test]
    fn lambda_chain_products() {
        let iso = lambda_chain_product_iso(&Poset::grid(2, 2), 5).unwrap();
        assert!(iso::are_isomorphic(
            &iso.target,
            &Poset::grid(2, 2).cartesian_product(&Poset::chain(2))
        ));
        for n in 1..=4 {
            for q in n..=7 {
                lambda_chain_product_iso(&Poset::chain(n), q as i32).unwrap();
            }
        }
        let fig4 = Poset::new(["a", "b", "c", "d", "e"], [("a", "d"), ("a", "c"), ("c", "e"), ("b", "e")]).unwrap();
        assert!(matches!(
            lambda_chain_product_iso(&fig4, 5),
            Err(Error::LambdaChainViolation { found: 2, expected: 3, .. })
        ));
    }

    #[test]
    fn strip_embedding_on_ranked_posets() {
        for p in [Poset::grid(2, 2), Poset::grid(2, 3), Poset::chain(3)] {
            for q in p.height() as i32..=7 {
                product_line_embedding(&p, q).unwrap();
            }
        }
        let (pent, _) = figure_one();
        assert_eq!(product_line_embedding(&pent, 6).unwrap_err(), Error::NotRanked);
    }

    #[test]
    fn rank_shift() {
        let p = Poset::grid(2, 2);
        let weak = RestrictionFunction::new(&p, vec![vec![1, 2, 3], vec![1, 3], vec![2, 4], vec![3, 4, 5]]).unwrap();
        let iso = rank_shift_iso(&p, &weak).unwrap();
        assert_eq!(iso.map.len(), iso.source.len());
    }
}
