//! Bender-Knuth involutions, promotion, and jeu de taquin on increasing labelings.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::ElemSet;
use crate::error::{Error, Result};
use crate::gamma::GammaPoset;
use crate::labelings::{induced_restriction, Labeling, LabelingSpace};
use crate::poset::{OrderIdeal, Poset};
use crate::toggles::{slice_toggle_set, toggle_promotion_set, ToggleWord};

/// `ρ_i`: every element holding `i` moves up to its next allowed label, and
/// every element holding that next label moves down to `i`, whenever the
/// move alone keeps the labeling valid. All moves are judged against `f`.
pub fn bender_knuth(space: &LabelingSpace, f: &Labeling, i: i32) -> Result<Labeling> {
    space.check(f)?;
    Ok(bender_knuth_unchecked(space, f, i))
}

pub(crate) fn bender_knuth_unchecked(space: &LabelingSpace, f: &Labeling, i: i32) -> Labeling {
    let r = space.restriction();
    let mut out = f.clone();
    for p in 0..f.len() {
        let Some(up) = r.next_above(p, i) else { continue };
        let k = f.get(p);
        if k == i {
            if space.fits_at(f, p, up) {
                out.0[p] = up;
            }
        } else if k == up && r.contains(p, i) && space.fits_at(f, p, i) {
            out.0[p] = i;
        }
    }
    out
}

/// Labels `i` for which some `ρ_i` might act.
pub fn promotion_range(space: &LabelingSpace) -> std::ops::Range<i32> {
    let r = space.restriction();
    match (r.global_min(), r.global_max()) {
        (Some(lo), Some(hi)) => lo..hi,
        _ => 0..0,
    }
}

/// `ρ_i` for every `i` in [`promotion_range`], smallest first.
pub fn inc_promotion(space: &LabelingSpace, f: &Labeling) -> Result<Labeling> {
    space.check(f)?;
    Ok(inc_promotion_unchecked(space, f))
}

pub(crate) fn inc_promotion_unchecked(space: &LabelingSpace, f: &Labeling) -> Labeling {
    promotion_range(space).fold(f.clone(), |g, i| bender_knuth_unchecked(space, &g, i))
}

/// One step of a promotion run: the operator name and the labeling after it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub operator: String,
    pub labeling: Labeling,
}

/// The state after each `ρ_i` of promotion, starting with `f` itself.
pub fn inc_promotion_trace(space: &LabelingSpace, f: &Labeling) -> Result<Vec<TraceStep>> {
    space.check(f)?;
    let mut steps = vec![TraceStep {
        operator: "start".into(),
        labeling: f.clone(),
    }];
    let mut g = f.clone();
    for i in promotion_range(space) {
        g = bender_knuth_unchecked(space, &g, i);
        steps.push(TraceStep {
            operator: format!("rho_{i}"),
            labeling: g.clone(),
        });
    }
    Ok(steps)
}

// ---- jeu de taquin ----

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cell {
    Hole,
    Label(i32),
}

/// A labeling in which some elements hold a hole instead of a label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SlideState {
    pub cells: Vec<Cell>,
}

impl SlideState {
    pub fn from_labeling(f: &Labeling) -> Self {
        Self {
            cells: f.values().iter().map(|&k| Cell::Label(k)).collect(),
        }
    }

    pub fn holes(&self) -> impl Iterator<Item = usize> + '_ {
        self.cells.iter().enumerate().filter(|(_, c)| **c == Cell::Hole).map(|(p, _)| p)
    }

    /// The labeling, once no holes remain.
    pub fn to_labeling(&self) -> Option<Labeling> {
        self.cells
            .iter()
            .map(|c| match c {
                Cell::Label(k) => Some(*k),
                Cell::Hole => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(Labeling)
    }
}

/// `σ_i`: a hole below an `i` takes the `i`; an `i` above a hole becomes a hole.
/// Every move is read off the state before the slide.
pub fn jdt_slide(poset: &Poset, state: &SlideState, i: i32) -> SlideState {
    let old = &state.cells;
    let cells = (0..old.len())
        .map(|x| match old[x] {
            Cell::Hole if poset.upper_covers(x).iter().any(|&y| old[y] == Cell::Label(i)) => Cell::Label(i),
            Cell::Label(k) if k == i && poset.lower_covers(x).iter().any(|&z| old[z] == Cell::Hole) => Cell::Hole,
            c => c,
        })
        .collect();
    SlideState { cells }
}

/// `σ_{from→to}`: replaces every `from` by `to`.
pub fn relabel(state: &SlideState, from: Cell, to: Cell) -> SlideState {
    SlideState {
        cells: state.cells.iter().map(|&c| if c == from { to } else { c }).collect(),
    }
}

fn check_bounded(poset: &Poset, q: i32, f: &Labeling) -> Result<()> {
    if f.len() != poset.len() {
        return Err(Error::InvalidLabeling(format!(
            "expected {} labels, found {}",
            poset.len(),
            f.len()
        )));
    }
    for p in 0..f.len() {
        if !(1..=q).contains(&f.get(p)) {
            return Err(Error::LabelOutOfRange {
                element: poset.name(p).to_string(),
                label: f.get(p),
                q,
            });
        }
    }
    for (a, b) in poset.covers() {
        if f.get(a) >= f.get(b) {
            return Err(Error::InvalidLabeling(format!(
                "labels at `{}` and `{}` do not increase",
                poset.name(a),
                poset.name(b)
            )));
        }
    }
    Ok(())
}

/// Every intermediate state of jeu de taquin promotion, in order:
/// after `σ_{1→☐}`, after each `σ_i`, after `σ_{☐→q+1}`.
pub fn jdt_states(poset: &Poset, q: i32, f: &Labeling) -> Result<Vec<SlideState>> {
    check_bounded(poset, q, f)?;
    let mut states = vec![relabel(&SlideState::from_labeling(f), Cell::Label(1), Cell::Hole)];
    for i in 2..=q {
        let next = jdt_slide(poset, states.last().expect("nonempty"), i);
        states.push(next);
    }
    let filled = relabel(states.last().expect("nonempty"), Cell::Hole, Cell::Label(q + 1));
    states.push(filled);
    Ok(states)
}

/// Promotion by sliding holes from the bottom to the top, then subtracting 1.
pub fn jdt_promotion(poset: &Poset, q: i32, f: &Labeling) -> Result<Labeling> {
    let states = jdt_states(poset, q, f)?;
    let last = states.last().expect("nonempty").to_labeling().expect("holes filled");
    Ok(Labeling(last.values().iter().map(|k| k - 1).collect()))
}

/// Jeu de taquin promotion on a labeling space, which must be `Inc^q(P)`.
pub fn jdt_promotion_in(space: &LabelingSpace, f: &Labeling) -> Result<Labeling> {
    let q = global_bound(space)?;
    space.check(f)?;
    jdt_promotion(space.poset(), q, f)
}

/// The bound `q` when the space is `Inc^q(P)`.
pub fn global_bound(space: &LabelingSpace) -> Result<i32> {
    let q = space.restriction().global_max().unwrap_or(0);
    let bounded = space.strictness() == crate::labelings::Strictness::Strict
        && (space.poset().is_empty() || induced_restriction(space.poset(), q).is_ok_and(|r| &r == space.restriction()));
    if bounded {
        Ok(q)
    } else {
        Err(Error::NotGlobalBoundMode)
    }
}

/// Elements that hold a hole at some stage of jeu de taquin promotion.
pub fn sliding_subposet(poset: &Poset, q: i32, f: &Labeling) -> Result<ElemSet> {
    let mut out = ElemSet::empty(poset.len());
    for s in jdt_states(poset, q, f)? {
        for p in s.holes() {
            out.insert(p);
        }
    }
    Ok(out)
}

// ---- binary content ----

/// Which of the labels `1..=q` occur.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BinaryContent(pub Vec<bool>);

impl BinaryContent {
    /// `(a₂, …, a_q, a₁)`.
    pub fn rotated(&self) -> Self {
        let mut v = self.0.clone();
        if !v.is_empty() {
            v.rotate_left(1);
        }
        Self(v)
    }

    pub fn bits(&self) -> String {
        self.0.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

pub fn binary_content(poset: &Poset, f: &Labeling, q: i32) -> Result<BinaryContent> {
    let mut bits = vec![false; q.max(0) as usize];
    for p in 0..f.len() {
        let k = f.get(p);
        if !(1..=q).contains(&k) {
            return Err(Error::LabelOutOfRange {
                element: poset.name(p).to_string(),
                label: k,
                q,
            });
        }
        bits[(k - 1) as usize] = true;
    }
    Ok(BinaryContent(bits))
}

// ---- verification sweeps ----

/// Outcome of checking an identity over a finite family of inputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub checked: usize,
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub input: Labeling,
    pub step: String,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }

    /// First failure in input order, so parallel runs agree with serial ones.
    fn collect(results: Vec<(usize, Option<Counterexample>)>) -> Self {
        let checked = results.iter().map(|(n, _)| n).sum();
        let counterexample = results.into_iter().find_map(|(_, c)| c);
        Self { checked, counterexample }
    }
}

/// `Con(promote(f))` is the left rotation of `Con(f)` for every `f` in `Inc^q(P)`.
pub fn verify_resonance_with<F>(poset: &Poset, q: i32, budget: usize, promote: F) -> Result<Verdict>
where
    F: Fn(&LabelingSpace, &Labeling) -> Labeling + Sync,
{
    let space = LabelingSpace::with_bound(poset.clone(), q)?;
    let all = space.enumerate_within(budget)?;
    let results = all
        .par_iter()
        .map(|f| {
            let before = binary_content(poset, f, q).expect("bounded labeling");
            let g = promote(&space, f);
            let ok = binary_content(poset, &g, q).is_ok_and(|after| after == before.rotated());
            let bad = (!ok).then(|| Counterexample {
                input: f.clone(),
                step: "content rotation".into(),
            });
            (1, bad)
        })
        .collect();
    Ok(Verdict::collect(results))
}

pub fn verify_resonance(poset: &Poset, q: i32, budget: usize) -> Result<Verdict> {
    verify_resonance_with(poset, q, budget, inc_promotion_unchecked)
}

/// Through the bijection with ideals of `Γ(P, R)`, each `ρ_k` is the slice
/// toggle at level `k` and promotion is toggle-promotion.
pub fn verify_equivariance(gamma: &GammaPoset, budget: usize) -> Result<Verdict> {
    let space = gamma.space();
    let order = gamma.toggle_order();
    let all = space.enumerate_within(budget)?;
    let levels: Vec<i32> = promotion_range(space).collect();
    let g = gamma.poset();
    let results = all
        .par_iter()
        .map(|f| {
            let ideal = gamma.labeling_to_ideal_unchecked(f);
            let mut checked = 0;
            for &k in &levels {
                checked += 1;
                let lhs = gamma.labeling_to_ideal_unchecked(&bender_knuth_unchecked(space, f, k));
                let mut rhs = ideal.as_set().clone();
                slice_toggle_set(g, &order, k as i64, &mut rhs);
                if lhs.as_set() != &rhs {
                    let bad = Counterexample {
                        input: f.clone(),
                        step: format!("rho_{k}"),
                    };
                    return (checked, Some(bad));
                }
            }
            checked += 1;
            let lhs = gamma.labeling_to_ideal_unchecked(&inc_promotion_unchecked(space, f));
            let mut rhs = ideal.into_set();
            toggle_promotion_set(g, &order, &mut rhs);
            let bad = (lhs.as_set() != &rhs).then(|| Counterexample {
                input: f.clone(),
                step: "promotion".into(),
            });
            (checked, bad)
        })
        .collect();
    Ok(Verdict::collect(results))
}

/// `I ↦ Con(φ(d(I)))` carries rowmotion to left rotation, where `φ` reads a
/// labeling off an ideal of `Γ(P, q)` and `d` conjugates rowmotion to toggle-promotion.
pub fn verify_row_resonance(gamma: &GammaPoset, d: &ToggleWord, budget: usize) -> Result<Verdict> {
    let q = global_bound(gamma.space())?;
    let g = gamma.poset();
    let ideals = g.order_ideals_within(budget)?;
    let content = |set: &ElemSet| {
        let mut t = set.clone();
        d.apply_set(g, &mut t);
        binary_content(gamma.base(), &gamma.labeling_of_set_unchecked(&t), q).expect("bounded labeling")
    };
    let results = ideals
        .par_iter()
        .map(|i: &OrderIdeal| {
            let row = crate::toggles::rowmotion_set(g, i.as_set());
            let ok = content(&row) == content(i.as_set()).rotated();
            let bad = (!ok).then(|| Counterexample {
                input: gamma.labeling_of_set_unchecked(i.as_set()),
                step: "rowmotion".into(),
            });
            (1, bad)
        })
        .collect();
    Ok(Verdict::collect(results))
}

/// `Inc_R(P) → Inc_R(P)` agrees with jeu de taquin promotion on every labeling.
pub fn verify_bk_equals_jdt(space: &LabelingSpace, budget: usize) -> Result<Verdict> {
    let q = global_bound(space)?;
    let all = space.enumerate_within(budget)?;
    let results = all
        .par_iter()
        .map(|f| {
            let ok = jdt_promotion(space.poset(), q, f).is_ok_and(|j| j == inc_promotion_unchecked(space, f));
            let bad = (!ok).then(|| Counterexample {
                input: f.clone(),
                step: "promotion".into(),
            });
            (1, bad)
        })
        .collect();
    Ok(Verdict::collect(results))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::build_gamma;
    use crate::labelings::{RestrictionFunction, Strictness};

    fn fig2() -> LabelingSpace {
        let p = Poset::new(["a", "b", "c", "d", "e"], [("a", "b"), ("a", "c"), ("c", "d"), ("e", "d")]).unwrap();
        LabelingSpace::with_bound(p, 5).unwrap()
    }

    fn fig11() -> Poset {
        Poset::new(
            ["a1", "a2", "a3", "b1", "b2", "b3", "b4", "c1", "c2", "c3"],
            [
                ("a1", "b1"),
                ("a1", "b3"),
                ("a2", "b1"),
                ("a2", "b2"),
                ("a2", "b3"),
                ("a2", "b4"),
                ("a3", "b2"),
                ("a3", "b4"),
                ("b1", "c1"),
                ("b1", "c2"),
                ("b2", "c1"),
                ("b2", "c2"),
                ("b3", "c2"),
                ("b3", "c3"),
                ("b4", "c2"),
                ("b4", "c3"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn figure_two_steps() {
        let s = fig2();
        let f = Labeling(vec![1, 3, 3, 5, 2]);
        let trace = inc_promotion_trace(&s, &f).unwrap();
        let got: Vec<Vec<i32>> = trace.iter().map(|t| t.labeling.0.clone()).collect();
        assert_eq!(
            got,
            vec![
                vec![1, 3, 3, 5, 2],
                vec![2, 3, 3, 5, 1],
                vec![2, 3, 3, 5, 1],
                vec![2, 4, 4, 5, 1],
                vec![2, 5, 4, 5, 1],
            ]
        );
        assert_eq!(jdt_promotion_in(&s, &f).unwrap(), Labeling(vec![2, 5, 4, 5, 1]));
    }

    #[test]
    fn bender_knuth_is_an_involution() {
        let s = fig2();
        for f in s.enumerate() {
            for i in 0..6 {
                let g = bender_knuth(&s, &f, i).unwrap();
                assert!(s.contains(&g));
                assert_eq!(bender_knuth(&s, &g, i).unwrap(), f);
            }
        }
    }

    #[test]
    fn promotion_is_a_bijection() {
        let s = fig2();
        let all = s.enumerate();
        let mut images: Vec<Labeling> = all.iter().map(|f| inc_promotion(&s, f).unwrap()).collect();
        images.sort();
        assert_eq!(images, all);
    }

    #[test]
    fn singleton_restrictions_fix_everything() {
        let p = Poset::chain(3);
        let r = RestrictionFunction::new(&p, vec![vec![1], vec![4], vec![9]]).unwrap();
        let s = LabelingSpace::new(p, r, Strictness::Strict).unwrap();
        let f = Labeling(vec![1, 4, 9]);
        assert_eq!(inc_promotion(&s, &f).unwrap(), f);
    }

    #[test]
    fn figure_eleven_slides() {
        let p = fig11();
        let f = Labeling(vec![1, 3, 1, 5, 4, 6, 4, 7, 8, 7]);
        assert_eq!(jdt_promotion(&p, 8, &f).unwrap(), Labeling(vec![4, 2, 3, 6, 6, 5, 6, 8, 7, 8]));
        let slid: Vec<&str> = sliding_subposet(&p, 8, &f).unwrap().iter().map(|x| p.name(x)).collect();
        assert_eq!(slid, ["a1", "a3", "b1", "b2", "b4", "c1", "c3"]);
        let first = relabel(&SlideState::from_labeling(&f), Cell::Label(1), Cell::Hole);
        assert_eq!(first.holes().collect::<Vec<_>>(), vec![0, 2]);

        let s = LabelingSpace::with_bound(p.clone(), 8).unwrap();
        let trace = inc_promotion_trace(&s, &f).unwrap();
        assert_eq!(trace[2].labeling, Labeling(vec![3, 2, 3, 5, 4, 6, 4, 7, 8, 7]));
        assert_eq!(trace[3].operator, "rho_3");
        assert_eq!(trace[3].labeling, Labeling(vec![4, 2, 3, 5, 4, 6, 4, 7, 8, 7]));
        assert_eq!(trace[4].labeling, Labeling(vec![4, 2, 3, 5, 5, 6, 5, 7, 8, 7]));
        assert_eq!(trace.last().unwrap().labeling, Labeling(vec![4, 2, 3, 6, 6, 5, 6, 8, 7, 8]));
    }

    #[test]
    fn slides_without_holes_do_nothing() {
        let p = fig11();
        let s = SlideState::from_labeling(&Labeling(vec![1, 3, 1, 5, 4, 6, 4, 7, 8, 7]));
        assert_eq!(jdt_slide(&p, &s, 4), s);
    }

    #[test]
    fn no_ones_means_shift_down() {
        let p = fig11();
        let f = Labeling(vec![2, 2, 2, 4, 4, 4, 4, 6, 6, 6]);
        assert_eq!(
            jdt_promotion(&p, 8, &f).unwrap(),
            Labeling(f.values().iter().map(|k| k - 1).collect())
        );
        assert!(sliding_subposet(&p, 8, &f).unwrap().is_empty());
    }

    #[test]
    fn sliding_subposet_runs_bottom_to_top() {
        let s = fig2();
        let p = s.poset();
        for f in s.enumerate() {
            let slid = sliding_subposet(p, 5, &f).unwrap();
            for x in slid.iter() {
                let lower_in = p.lower_covers(x).iter().any(|&y| slid.contains(y));
                let upper_in = p.upper_covers(x).iter().any(|&y| slid.contains(y));
                assert!(lower_in || p.lower_covers(x).is_empty());
                assert!(upper_in || p.upper_covers(x).is_empty());
            }
        }
    }

    #[test]
    fn jdt_needs_a_global_bound() {
        let p = Poset::chain(2);
        let r = RestrictionFunction::new(&p, vec![vec![1, 3], vec![2, 4]]).unwrap();
        let s = LabelingSpace::new(p, r, Strictness::Strict).unwrap();
        assert_eq!(jdt_promotion_in(&s, &Labeling(vec![1, 2])), Err(Error::NotGlobalBoundMode));
    }

    #[test]
    fn content_examples() {
        let s = fig2();
        let f = Labeling(vec![1, 3, 3, 5, 2]);
        let con = binary_content(s.poset(), &f, 5).unwrap();
        assert_eq!(con.bits(), "11101");
        let after = binary_content(s.poset(), &inc_promotion(&s, &f).unwrap(), 5).unwrap();
        assert_eq!(after.bits(), "11011");
        assert_eq!(after, con.rotated());
        assert!(matches!(
            binary_content(s.poset(), &f, 4),
            Err(Error::LabelOutOfRange { label: 5, .. })
        ));
    }

    #[test]
    fn resonance_and_negative_control() {
        let s = fig2();
        assert!(verify_resonance(s.poset(), 5, 1000).unwrap().holds());
        assert!(verify_resonance(&Poset::chain(1), 3, 10).unwrap().holds());
        let skip_two = |space: &LabelingSpace, f: &Labeling| {
            promotion_range(space)
                .filter(|&i| i != 2)
                .fold(f.clone(), |g, i| bender_knuth_unchecked(space, &g, i))
        };
        let verdict = verify_resonance_with(s.poset(), 5, 1000, skip_two).unwrap();
        assert!(!verdict.holds());
        let bad = verdict.counterexample.unwrap().input;
        let broken = skip_two(&s, &bad);
        assert_ne!(
            binary_content(s.poset(), &broken, 5).ok(),
            Some(binary_content(s.poset(), &bad, 5).unwrap().rotated())
        );
    }

    #[test]
    fn figure_one_involutions_as_toggles() {
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
        let gamma = build_gamma(&p, &r).unwrap();
        let s = gamma.space();
        let f = Labeling(vec![1, 2, 4, 5, 7]);
        assert_eq!(bender_knuth(s, &f, 2).unwrap(), Labeling(vec![1, 3, 2, 5, 7]));
        assert_eq!(bender_knuth(s, &f, 4).unwrap(), f);
        let before = gamma.labeling_to_ideal(&f).unwrap();
        let after = gamma.labeling_to_ideal(&bender_knuth(s, &f, 2).unwrap()).unwrap();
        let (b2, c2) = (gamma.index_of(1, 2).unwrap(), gamma.index_of(2, 2).unwrap());
        assert!(before.contains(b2) && !after.contains(b2));
        assert!(!before.contains(c2) && after.contains(c2));
        assert!(verify_equivariance(&gamma, 10_000).unwrap().holds());
    }

    #[test]
    fn linear_extensions_use_classical_swaps() {
        let p = Poset::new(["a", "b", "c", "d"], [("a", "c"), ("b", "c"), ("b", "d")]).unwrap();
        let n = p.len() as i32;
        let s = LabelingSpace::with_bound(p.clone(), n).unwrap();
        for ext in p.linear_extensions() {
            let f = Labeling(ext.iter().map(|&k| k as i32).collect());
            for i in 1..n {
                let x = ext.iter().position(|&k| k as i32 == i).unwrap();
                let y = ext.iter().position(|&k| k as i32 == i + 1).unwrap();
                let mut classical = f.clone();
                if !p.le(x, y) {
                    classical.0.swap(x, y);
                }
                assert_eq!(bender_knuth(&s, &f, i).unwrap(), classical);
            }
        }
    }
}
