//! Shipped example instances and seeded random generators.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::io::{parse_instance, Instance};
use crate::labelings::{induced_restriction, RestrictionFunction, Strictness};
use crate::poset::Poset;

const SHIPPED: &[(&str, &str)] = &[
    ("fig1", include_str!("../../../fixtures/fig1.json")),
    ("fig2", include_str!("../../../fixtures/fig2.json")),
    ("fig4", include_str!("../../../fixtures/fig4.json")),
    ("fig10", include_str!("../../../fixtures/fig10.json")),
    ("fig11", include_str!("../../../fixtures/fig11.json")),
    ("staircase3", include_str!("../../../fixtures/staircase3.json")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    SHIPPED.iter().map(|(n, _)| *n)
}

pub fn source(name: &str) -> Option<&'static str> {
    SHIPPED.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn load(name: &str) -> Result<Instance> {
    let text = source(name).ok_or_else(|| Error::Parse(format!("no fixture named `{name}`")))?;
    parse_instance(text)
}

impl Instance {
    /// The explicit restriction, else the one induced by `q`.
    pub fn effective_restriction(&self) -> Result<Option<RestrictionFunction>> {
        match (&self.restriction, self.q) {
            (Some(r), _) => Ok(Some(r.clone())),
            (None, Some(q)) => induced_restriction(&self.poset, q).map(Some),
            (None, None) => Ok(None),
        }
    }
}

/// A random poset on `n` elements: each pair `i < j` is related with probability `p`.
pub fn random_poset<R: Rng>(rng: &mut R, n: usize, p: f64) -> Poset {
    let mut covers = Vec::new();
    for j in 0..n {
        for i in 0..j {
            if rng.gen_bool(p) {
                covers.push((i, j));
            }
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let covers: Vec<_> = covers.into_iter().map(|(a, b)| (perm[a], perm[b])).collect();
    Poset::from_index_covers(names_for(n), &covers).expect("relations follow an order")
}

/// A random ranked poset: elements on levels, covers only between adjacent
/// levels, and every element above the bottom level covers something.
pub fn random_ranked_poset<R: Rng>(rng: &mut R, n: usize, max_levels: usize) -> Poset {
    let levels = rng.gen_range(1..=max_levels.min(n).max(1));
    let mut level_of: Vec<usize> = (0..n).map(|i| if i < levels { i } else { rng.gen_range(0..levels) }).collect();
    level_of.sort_unstable();
    let mut covers = Vec::new();
    for b in 0..n {
        if level_of[b] == 0 {
            continue;
        }
        let below: Vec<usize> = (0..n).filter(|&a| level_of[a] + 1 == level_of[b]).collect();
        let forced = *below.choose(rng).expect("lower level is nonempty");
        for &a in &below {
            if a == forced || rng.gen_bool(0.4) {
                covers.push((a, b));
            }
        }
    }
    Poset::from_index_covers(names_for(n), &covers).expect("levels are acyclic")
}

fn names_for(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

/// A random restriction whose minima and maxima increase along covers
/// under `strictness`, drawn from labels starting at 1.
pub fn random_restriction<R: Rng>(rng: &mut R, poset: &Poset, strictness: Strictness, extra: usize) -> RestrictionFunction {
    let gap = strictness.gap();
    let n = poset.len();
    let mut lo = vec![0i32; n];
    for &p in poset.topological_order() {
        let floor = poset.lower_covers(p).iter().map(|&l| lo[l] + gap).max().unwrap_or(1);
        lo[p] = floor + rng.gen_range(0..=1);
    }
    let top = lo.iter().copied().max().unwrap_or(1) + rng.gen_range(0..=2);
    let mut hi = vec![0i32; n];
    for &p in poset.topological_order().iter().rev() {
        let ceil = poset.upper_covers(p).iter().map(|&u| hi[u] - gap).min().unwrap_or(top);
        hi[p] = (ceil - rng.gen_range(0..=1)).max(lo[p]);
    }
    let sets = (0..n)
        .map(|p| {
            let mut set = vec![lo[p], hi[p]];
            let inner: Vec<i32> = (lo[p] + 1..hi[p]).collect();
            let take = rng.gen_range(0..=extra.min(inner.len()));
            set.extend(inner.choose_multiple(rng, take));
            set
        })
        .collect();
    RestrictionFunction::new(poset, sets).expect("sets are nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labelings::first_inconsistency;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn every_fixture_loads() {
        for name in names() {
            let inst = load(name).unwrap();
            assert!(inst.effective_restriction().unwrap().is_some(), "{name}");
        }
        assert!(load("nope").is_err());
    }

    #[test]
    fn random_restrictions_are_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(1..=7);
            let p = random_poset(&mut rng, n, 0.4);
            for s in [Strictness::Strict, Strictness::Weak] {
                let r = random_restriction(&mut rng, &p, s, 2);
                assert_eq!(first_inconsistency(&p, &r, s).unwrap(), None);
            }
        }
    }

    #[test]
    fn random_ranked_posets_are_ranked() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(1..=10);
            let p = random_ranked_poset(&mut rng, n, 4);
            assert!(p.rank_function().is_some());
            assert!(p.dropped_covers().is_empty());
        }
    }
}
