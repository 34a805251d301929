//! Restriction functions and increasing labelings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::Poset;

/// Whether labels must strictly increase along `<` or may stay equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Strictness {
    #[default]
    Strict,
    Weak,
}

impl Strictness {
    /// Smallest allowed gap `f(upper) - f(lower)` across a relation.
    pub fn gap(self) -> i32 {
        match self {
            Strictness::Strict => 1,
            Strictness::Weak => 0,
        }
    }
}

/// Per-element finite sets of allowed labels, each sorted and nonempty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RestrictionFunction {
    sets: Vec<Vec<i32>>,
}

impl RestrictionFunction {
    /// One set per element, in element order. Sets are sorted and deduplicated.
    pub fn new(poset: &Poset, sets: Vec<Vec<i32>>) -> Result<Self> {
        if sets.len() < poset.len() {
            return Err(Error::MissingRestriction(poset.name(sets.len()).to_string()));
        }
        if sets.len() > poset.len() {
            return Err(Error::UnknownElement(format!("#{}", poset.len())));
        }
        let mut out = Vec::with_capacity(sets.len());
        for (p, mut set) in sets.into_iter().enumerate() {
            set.sort_unstable();
            set.dedup();
            if set.is_empty() {
                return Err(Error::EmptyRestriction(poset.name(p).to_string()));
            }
            out.push(set);
        }
        Ok(Self { sets: out })
    }

    pub fn from_map(poset: &Poset, map: &BTreeMap<String, Vec<i32>>) -> Result<Self> {
        for name in map.keys() {
            poset.index_of(name)?;
        }
        let sets = poset
            .names()
            .iter()
            .map(|name| map.get(name).cloned().ok_or_else(|| Error::MissingRestriction(name.clone())))
            .collect::<Result<Vec<_>>>()?;
        Self::new(poset, sets)
    }

    /// Every element gets the same interval `[lo, hi]`.
    pub fn constant(poset: &Poset, lo: i32, hi: i32) -> Result<Self> {
        Self::new(poset, vec![(lo..=hi).collect(); poset.len()])
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn get(&self, p: usize) -> &[i32] {
        &self.sets[p]
    }

    pub fn min(&self, p: usize) -> i32 {
        self.sets[p][0]
    }

    pub fn max(&self, p: usize) -> i32 {
        *self.sets[p].last().expect("nonempty")
    }

    /// `R(p)*`: every allowed label except the largest.
    pub fn starred(&self, p: usize) -> &[i32] {
        &self.sets[p][..self.sets[p].len() - 1]
    }

    pub fn contains(&self, p: usize, k: i32) -> bool {
        self.sets[p].binary_search(&k).is_ok()
    }

    /// `R(p)_{>k}`: the least allowed label above `k`.
    pub fn next_above(&self, p: usize, k: i32) -> Option<i32> {
        let set = &self.sets[p];
        set.get(set.partition_point(|&x| x <= k)).copied()
    }

    /// `R(p)_{<k}`: the greatest allowed label below `k`.
    pub fn prev_below(&self, p: usize, k: i32) -> Option<i32> {
        let set = &self.sets[p];
        set.partition_point(|&x| x < k).checked_sub(1).map(|i| set[i])
    }

    /// `R(p)_{<=k}`.
    pub fn at_most(&self, p: usize, k: i32) -> Option<i32> {
        let set = &self.sets[p];
        set.partition_point(|&x| x <= k).checked_sub(1).map(|i| set[i])
    }

    /// Greatest label at `p` that sits below `k` under the given strictness.
    pub fn below(&self, p: usize, k: i32, strictness: Strictness) -> Option<i32> {
        match strictness {
            Strictness::Strict => self.prev_below(p, k),
            Strictness::Weak => self.at_most(p, k),
        }
    }

    /// Smallest label used anywhere.
    pub fn global_min(&self) -> Option<i32> {
        (0..self.len()).map(|p| self.min(p)).min()
    }

    /// Largest label used anywhere.
    pub fn global_max(&self) -> Option<i32> {
        (0..self.len()).map(|p| self.max(p)).max()
    }

    pub fn is_interval(&self, p: usize) -> bool {
        let set = &self.sets[p];
        (self.max(p) - self.min(p)) as usize + 1 == set.len()
    }

    /// Adds `offset[p]` to every label of `R(p)`.
    pub fn shifted(&self, offset: &[i64]) -> Self {
        let sets = self
            .sets
            .iter()
            .zip(offset)
            .map(|(set, &d)| set.iter().map(|&k| k + d as i32).collect())
            .collect();
        Self { sets }
    }

    pub fn to_map(&self, poset: &Poset) -> BTreeMap<String, Vec<i32>> {
        poset.names().iter().cloned().zip(self.sets.iter().cloned()).collect()
    }
}

/// A labeling stored densely by element position.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Labeling(pub Vec<i32>);

impl Labeling {
    pub fn get(&self, p: usize) -> i32 {
        self.0[p]
    }

    pub fn values(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Pointwise `self <= other`.
    pub fn le_pointwise(&self, other: &Labeling) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl From<Vec<i32>> for Labeling {
    fn from(values: Vec<i32>) -> Self {
        Self(values)
    }
}

fn check_len(poset: &Poset, r: &RestrictionFunction) -> Result<()> {
    if r.len() < poset.len() {
        return Err(Error::MissingRestriction(poset.name(r.len()).to_string()));
    }
    if r.len() > poset.len() {
        return Err(Error::MismatchedContext);
    }
    Ok(())
}

/// First cover whose minima or maxima fail to increase under `strictness`.
pub fn first_inconsistency(poset: &Poset, r: &RestrictionFunction, strictness: Strictness) -> Result<Option<(usize, usize)>> {
    check_len(poset, r)?;
    let gap = strictness.gap();
    Ok(poset
        .covers()
        .into_iter()
        .find(|&(x, y)| r.min(y) - r.min(x) < gap || r.max(y) - r.max(x) < gap))
}

/// Minima and maxima strictly increase along every cover.
pub fn is_consistent(poset: &Poset, r: &RestrictionFunction) -> Result<bool> {
    Ok(first_inconsistency(poset, r, Strictness::Strict)?.is_none())
}

/// Minima and maxima weakly increase along every cover.
pub fn is_weakly_consistent(poset: &Poset, r: &RestrictionFunction) -> Result<bool> {
    Ok(first_inconsistency(poset, r, Strictness::Weak)?.is_none())
}

pub(crate) fn require_consistent(poset: &Poset, r: &RestrictionFunction, strictness: Strictness) -> Result<()> {
    match first_inconsistency(poset, r, strictness)? {
        None => Ok(()),
        Some((x, y)) => {
            let (lower, upper) = (poset.name(x).to_string(), poset.name(y).to_string());
            Err(match strictness {
                Strictness::Strict => Error::InconsistentRestriction { lower, upper },
                Strictness::Weak => Error::WeaklyInconsistentRestriction { lower, upper },
            })
        }
    }
}

/// `R(p) = [1 + delta(p), q - nu(p)]`, the tightest ranges for labels in `1..=q`.
pub fn induced_restriction(poset: &Poset, q: i32) -> Result<RestrictionFunction> {
    let (deltas, nus) = (poset.deltas(), poset.nus());
    let mut sets = Vec::with_capacity(poset.len());
    for p in 0..poset.len() {
        let chain = deltas[p] + nus[p] + 1;
        if chain as i64 > q as i64 {
            return Err(Error::Degenerate {
                element: poset.name(p).to_string(),
                chain,
                q,
            });
        }
        sets.push((1 + deltas[p] as i32..=q - nus[p] as i32).collect());
    }
    RestrictionFunction::new(poset, sets)
}

/// A poset with a restriction function and a strictness mode: the ambient
/// space of labelings that `meet`, `join` and enumeration work in.
#[derive(Debug, Clone)]
pub struct LabelingSpace {
    poset: Poset,
    restriction: RestrictionFunction,
    strictness: Strictness,
}

/// Meet irreducible labelings keyed by `(element, label)` plus the top labeling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeetIrreducibles {
    pub pairs: Vec<((usize, i32), Labeling)>,
    pub top: Labeling,
}

impl LabelingSpace {
    pub fn new(poset: Poset, restriction: RestrictionFunction, strictness: Strictness) -> Result<Self> {
        check_len(&poset, &restriction)?;
        Ok(Self {
            poset,
            restriction,
            strictness,
        })
    }

    /// The space `Inc^q(P)` with the induced interval restriction.
    pub fn with_bound(poset: Poset, q: i32) -> Result<Self> {
        let restriction = induced_restriction(&poset, q)?;
        Self::new(poset, restriction, Strictness::Strict)
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn restriction(&self) -> &RestrictionFunction {
        &self.restriction
    }

    pub fn strictness(&self) -> Strictness {
        self.strictness
    }

    pub fn is_consistent(&self) -> bool {
        first_inconsistency(&self.poset, &self.restriction, self.strictness)
            .map(|c| c.is_none())
            .unwrap_or(false)
    }

    pub fn require_consistent(&self) -> Result<()> {
        require_consistent(&self.poset, &self.restriction, self.strictness)
    }

    /// Checks membership in the space, naming the first failure.
    pub fn check(&self, f: &Labeling) -> Result<()> {
        if f.len() != self.poset.len() {
            return Err(Error::InvalidLabeling(format!(
                "expected {} labels, found {}",
                self.poset.len(),
                f.len()
            )));
        }
        for p in 0..f.len() {
            if !self.restriction.contains(p, f.get(p)) {
                return Err(Error::InvalidLabeling(format!(
                    "label {} is not allowed at `{}`",
                    f.get(p),
                    self.poset.name(p)
                )));
            }
        }
        let gap = self.strictness.gap();
        for (x, y) in self.poset.covers() {
            if f.get(y) - f.get(x) < gap {
                return Err(Error::InvalidLabeling(format!(
                    "labels {} at `{}` and {} at `{}` do not increase",
                    f.get(x),
                    self.poset.name(x),
                    f.get(y),
                    self.poset.name(y)
                )));
            }
        }
        Ok(())
    }

    pub fn contains(&self, f: &Labeling) -> bool {
        self.check(f).is_ok()
    }

    /// Would `f` stay in the space with `f(p)` replaced by `k`?
    pub(crate) fn fits_at(&self, f: &Labeling, p: usize, k: i32) -> bool {
        let gap = self.strictness.gap();
        self.restriction.contains(p, k)
            && self.poset.lower_covers(p).iter().all(|&l| k - f.get(l) >= gap)
            && self.poset.upper_covers(p).iter().all(|&u| f.get(u) - k >= gap)
    }

    /// Parses a labeling given by element names.
    pub fn labeling_from_names<S: AsRef<str>>(&self, pairs: impl IntoIterator<Item = (S, i32)>) -> Result<Labeling> {
        let mut values = vec![None; self.poset.len()];
        for (name, k) in pairs {
            values[self.poset.index_of(name.as_ref())?] = Some(k);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(p, v)| v.ok_or_else(|| Error::InvalidLabeling(format!("no label for `{}`", self.poset.name(p)))))
            .collect::<Result<Vec<_>>>()?;
        let f = Labeling(values);
        self.check(&f)?;
        Ok(f)
    }

    /// Every labeling in the space, sorted.
    pub fn enumerate(&self) -> Vec<Labeling> {
        let mut out = Vec::new();
        self.visit(usize::MAX, |f| out.push(f.clone()));
        out.sort_unstable();
        out
    }

    pub fn enumerate_within(&self, budget: usize) -> Result<Vec<Labeling>> {
        let mut out = Vec::new();
        if !self.visit(budget, |f| out.push(f.clone())) {
            return Err(Error::BudgetExceeded { budget });
        }
        out.sort_unstable();
        Ok(out)
    }

    pub fn count(&self) -> usize {
        let mut n = 0;
        self.visit(usize::MAX, |_| n += 1);
        n
    }

    /// Number of labelings, or `None` once it passes `budget`.
    pub fn count_within(&self, budget: usize) -> Option<usize> {
        let mut n = 0;
        self.visit(budget, |_| n += 1).then_some(n)
    }

    /// Depth-first over a linear extension; each element takes labels at or
    /// above the bound forced by its already-labeled lower covers.
    fn visit(&self, budget: usize, mut emit: impl FnMut(&Labeling)) -> bool {
        let order = self.poset.topological_order();
        let mut f = Labeling(self.restriction.sets.iter().map(|s| s[0]).collect());
        let mut emitted = 0usize;
        self.visit_from(0, order, &mut f, &mut emitted, budget, &mut emit)
    }

    fn visit_from(
        &self,
        depth: usize,
        order: &[usize],
        f: &mut Labeling,
        emitted: &mut usize,
        budget: usize,
        emit: &mut impl FnMut(&Labeling),
    ) -> bool {
        if depth == order.len() {
            if *emitted == budget {
                return false;
            }
            *emitted += 1;
            emit(f);
            return true;
        }
        let p = order[depth];
        let gap = self.strictness.gap();
        let floor = self.poset.lower_covers(p).iter().map(|&l| f.0[l] + gap).max().unwrap_or(i32::MIN);
        let set = &self.restriction.sets[p];
        for &k in &set[set.partition_point(|&x| x < floor)..] {
            f.0[p] = k;
            if !self.visit_from(depth + 1, order, f, emitted, budget, emit) {
                return false;
            }
        }
        true
    }

    fn require_member(&self, f: &Labeling) -> Result<()> {
        self.check(f).map_err(|_| Error::MismatchedContext)
    }

    pub fn meet(&self, f: &Labeling, g: &Labeling) -> Result<Labeling> {
        self.require_member(f)?;
        self.require_member(g)?;
        Ok(Labeling(f.0.iter().zip(&g.0).map(|(a, b)| *a.min(b)).collect()))
    }

    pub fn join(&self, f: &Labeling, g: &Labeling) -> Result<Labeling> {
        self.require_member(f)?;
        self.require_member(g)?;
        Ok(Labeling(f.0.iter().zip(&g.0).map(|(a, b)| *a.max(b)).collect()))
    }

    /// `f(p) = max R(p)` everywhere; a member whenever `R` is consistent.
    pub fn top(&self) -> Labeling {
        Labeling((0..self.poset.len()).map(|p| self.restriction.max(p)).collect())
    }

    /// `f(p) = min R(p)` everywhere; a member whenever `R` is consistent.
    pub fn bottom(&self) -> Labeling {
        Labeling((0..self.poset.len()).map(|p| self.restriction.min(p)).collect())
    }

    /// Elements whose label can move to the next allowed label above it.
    pub fn raisable(&self, f: &Labeling) -> Vec<usize> {
        (0..self.poset.len())
            .filter(|&p| self.restriction.next_above(p, f.get(p)).is_some_and(|k| self.fits_at(f, p, k)))
            .collect()
    }

    /// Largest labeling with `g(p) <= cap`, built greedily from the top down.
    pub fn max_below(&self, p: usize, cap: i32) -> Option<Labeling> {
        let mut g = self.top();
        for &x in self.poset.topological_order().iter().rev() {
            let mut bound = if x == p { cap } else { i32::MAX };
            for &u in self.poset.upper_covers(x) {
                bound = bound.min(match self.strictness {
                    Strictness::Strict => g.get(u) - 1,
                    Strictness::Weak => g.get(u),
                });
            }
            g.0[x] = self.restriction.at_most(x, bound)?;
        }
        Some(g)
    }

    /// One meet irreducible per `(p, k)` with `k` in `R(p)*`, plus the top.
    pub fn meet_irreducibles(&self) -> Result<MeetIrreducibles> {
        self.require_consistent()?;
        let mut pairs = Vec::new();
        for p in 0..self.poset.len() {
            for &k in self.restriction.starred(p) {
                let g = self
                    .max_below(p, k)
                    .expect("consistent restriction admits a labeling through every allowed label");
                pairs.push(((p, k), g));
            }
        }
        Ok(MeetIrreducibles { pairs, top: self.top() })
    }
}
