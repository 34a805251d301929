//! Toggles on order ideals and the actions built from them.
//!
//! Words of toggles are written as products: the leftmost factor acts last.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::ElemSet;
use crate::error::{Error, Result};
use crate::poset::{OrderIdeal, Poset};

/// Default cap on the number of states an orbit decomposition may visit.
pub const DEFAULT_ORBIT_BUDGET: usize = 5_000_000;

// ---- single toggles ----

/// Toggles `p` in place when the result is still an ideal.
#[inline]
pub fn toggle_set(poset: &Poset, set: &mut ElemSet, p: usize) {
    if set.contains(p) {
        if !poset.upper_covers(p).iter().any(|&u| set.contains(u)) {
            set.remove(p);
        }
    } else if poset.lower_covers(p).iter().all(|&l| set.contains(l)) {
        set.insert(p);
    }
}

pub fn toggle(poset: &Poset, ideal: &OrderIdeal, p: usize) -> Result<OrderIdeal> {
    poset.check_element(p)?;
    let mut set = ideal.as_set().clone();
    toggle_set(poset, &mut set, p);
    Ok(OrderIdeal::from_set_unchecked(set))
}

/// Down-closure of the minimal elements outside the ideal.
pub fn rowmotion_set(poset: &Poset, set: &ElemSet) -> ElemSet {
    let mut out = ElemSet::empty(poset.len());
    for p in 0..poset.len() {
        if !set.contains(p) && poset.lower_covers(p).iter().all(|&l| set.contains(l)) {
            out.union_with(poset.down_set(p));
        }
    }
    out
}

pub fn rowmotion(poset: &Poset, ideal: &OrderIdeal) -> OrderIdeal {
    OrderIdeal::from_set_unchecked(rowmotion_set(poset, ideal.as_set()))
}

/// Toggles every element from the top of `extension` down to its bottom.
/// `extension` lists the elements of a linear extension, bottom first.
pub fn rowmotion_via_toggles(poset: &Poset, ideal: &OrderIdeal, extension: &[usize]) -> OrderIdeal {
    let mut set = ideal.as_set().clone();
    for &p in extension.iter().rev() {
        toggle_set(poset, &mut set, p);
    }
    OrderIdeal::from_set_unchecked(set)
}

// ---- toggle orders ----

/// How a level map relates to the covers of a poset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    /// Some cover joins two elements on the same level.
    Invalid,
    /// Covers always change level.
    Toggle,
    /// Covers always change level by exactly one.
    Column,
}

pub fn validate_toggle_order(poset: &Poset, levels: &[i64]) -> OrderKind {
    let mut kind = OrderKind::Column;
    for (a, b) in poset.covers() {
        let diff = (levels[b] - levels[a]).abs();
        if diff == 0 {
            return OrderKind::Invalid;
        }
        if diff != 1 {
            kind = OrderKind::Toggle;
        }
    }
    kind
}

/// Levels `H(p)` with `H(p1) != H(p2)` across every cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToggleOrder {
    levels: Vec<i64>,
    slices: BTreeMap<i64, Vec<usize>>,
    kind: OrderKind,
}

impl ToggleOrder {
    pub fn new(poset: &Poset, levels: Vec<i64>) -> Result<Self> {
        if levels.len() != poset.len() {
            return Err(Error::MismatchedContext);
        }
        for (a, b) in poset.covers() {
            if levels[a] == levels[b] {
                return Err(Error::NotAToggleOrder {
                    lower: poset.name(a).to_string(),
                    upper: poset.name(b).to_string(),
                    level: levels[a],
                });
            }
        }
        let kind = validate_toggle_order(poset, &levels);
        let mut slices: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (p, &h) in levels.iter().enumerate() {
            slices.entry(h).or_default().push(p);
        }
        Ok(Self { levels, slices, kind })
    }

    /// `H` given by a rank function.
    pub fn from_rank(poset: &Poset) -> Result<Self> {
        let rk = poset.rank_function().ok_or(Error::NotRanked)?;
        Self::new(poset, rk.values().to_vec())
    }

    pub fn level(&self, p: usize) -> i64 {
        self.levels[p]
    }

    pub fn levels(&self) -> &[i64] {
        &self.levels
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn is_column(&self) -> bool {
        self.kind == OrderKind::Column
    }

    /// Elements at level `i`, in element order.
    pub fn slice(&self, i: i64) -> &[usize] {
        self.slices.get(&i).map_or(&[], Vec::as_slice)
    }

    /// The range `[a, b]` of occupied levels, or `None` for the empty poset.
    pub fn support(&self) -> Option<(i64, i64)> {
        Some((*self.slices.keys().next()?, *self.slices.keys().next_back()?))
    }

    pub fn require_column(&self, poset: &Poset) -> Result<()> {
        for (a, b) in poset.covers() {
            let diff = self.levels[b] - self.levels[a];
            if diff.abs() != 1 {
                return Err(Error::NotColumnOrder {
                    lower: poset.name(a).to_string(),
                    upper: poset.name(b).to_string(),
                    diff,
                });
            }
        }
        Ok(())
    }
}

/// Applies every toggle at level `i`. Levels hold no covers, so order is irrelevant.
pub fn slice_toggle_set(poset: &Poset, order: &ToggleOrder, i: i64, set: &mut ElemSet) {
    for &p in order.slice(i) {
        toggle_set(poset, set, p);
    }
}

pub fn slice_toggle(poset: &Poset, order: &ToggleOrder, i: i64, ideal: &OrderIdeal) -> OrderIdeal {
    let mut set = ideal.as_set().clone();
    slice_toggle_set(poset, order, i, &mut set);
    OrderIdeal::from_set_unchecked(set)
}

/// Slice toggles at every level, lowest level first.
pub fn toggle_promotion_set(poset: &Poset, order: &ToggleOrder, set: &mut ElemSet) {
    for slice in order.slices.values() {
        for &p in slice {
            toggle_set(poset, set, p);
        }
    }
}

pub fn toggle_promotion(poset: &Poset, order: &ToggleOrder, ideal: &OrderIdeal) -> OrderIdeal {
    let mut set = ideal.as_set().clone();
    toggle_promotion_set(poset, order, &mut set);
    OrderIdeal::from_set_unchecked(set)
}

/// Slice toggles from the top level down; inverts [`toggle_promotion`].
pub fn toggle_promotion_inverse(poset: &Poset, order: &ToggleOrder, ideal: &OrderIdeal) -> OrderIdeal {
    let mut set = ideal.as_set().clone();
    for (_, slice) in order.slices.iter().rev() {
        for &p in slice {
            toggle_set(poset, &mut set, p);
        }
    }
    OrderIdeal::from_set_unchecked(set)
}

/// Splits `P` into layers: first the minimal elements on odd levels, then
/// repeatedly all minimal elements of what remains. The first layer may be
/// empty. Toggling the layers from last to first is rowmotion.
pub fn row_layers(poset: &Poset, order: &ToggleOrder) -> Result<Vec<Vec<usize>>> {
    order.require_column(poset)?;
    let n = poset.len();
    let mut placed = ElemSet::empty(n);
    let mut layers = Vec::new();
    let is_free = |placed: &ElemSet, p: usize| !placed.contains(p) && poset.lower_covers(p).iter().all(|&l| placed.contains(l));
    let first: Vec<usize> = (0..n)
        .filter(|&p| is_free(&placed, p) && order.level(p).rem_euclid(2) == 1)
        .collect();
    for &p in &first {
        placed.insert(p);
    }
    layers.push(first);
    while placed.len() < n {
        let layer: Vec<usize> = (0..n).filter(|&p| is_free(&placed, p)).collect();
        for &p in &layer {
            placed.insert(p);
        }
        layers.push(layer);
    }
    Ok(layers)
}

/// The layer conjugator needs every cover to join adjacent layers. That holds
/// on graded posets but can fail otherwise, when an element covers something
/// placed several layers below its other lower covers.
pub fn require_layer_columns(poset: &Poset, layers: &[Vec<usize>]) -> Result<()> {
    let mut layer_of = vec![0usize; poset.len()];
    for (i, layer) in layers.iter().enumerate() {
        for &p in layer {
            layer_of[p] = i;
        }
    }
    for (a, b) in poset.covers() {
        let gap = layer_of[b] - layer_of[a];
        if gap != 1 {
            return Err(Error::LayerGap {
                lower: poset.name(a).to_string(),
                upper: poset.name(b).to_string(),
                gap,
            });
        }
    }
    Ok(())
}

/// Toggles on even levels, then on odd levels.
pub fn gyration_set(poset: &Poset, order: &ToggleOrder, set: &mut ElemSet) {
    for parity in [0, 1] {
        for (&h, slice) in order.slices.iter() {
            if h.rem_euclid(2) == parity {
                for &p in slice {
                    toggle_set(poset, set, p);
                }
            }
        }
    }
}

pub fn gyration(poset: &Poset, order: &ToggleOrder, ideal: &OrderIdeal) -> Result<OrderIdeal> {
    order.require_column(poset)?;
    let mut set = ideal.as_set().clone();
    gyration_set(poset, order, &mut set);
    Ok(OrderIdeal::from_set_unchecked(set))
}

// ---- toggle words ----

/// A product of toggles; the rightmost toggle acts first.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ToggleWord {
    pub toggles: Vec<usize>,
}

impl ToggleWord {
    pub fn new(poset: &Poset, toggles: Vec<usize>) -> Result<Self> {
        for &p in &toggles {
            poset.check_element(p)?;
        }
        Ok(Self { toggles })
    }

    pub fn len(&self) -> usize {
        self.toggles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.toggles.is_empty()
    }

    pub fn apply_set(&self, poset: &Poset, set: &mut ElemSet) {
        for &p in self.toggles.iter().rev() {
            toggle_set(poset, set, p);
        }
    }

    pub fn apply(&self, poset: &Poset, ideal: &OrderIdeal) -> OrderIdeal {
        let mut set = ideal.as_set().clone();
        self.apply_set(poset, &mut set);
        OrderIdeal::from_set_unchecked(set)
    }

    /// Toggles are involutions, so the inverse is the reversed word.
    pub fn inverse(&self) -> Self {
        Self {
            toggles: self.toggles.iter().rev().copied().collect(),
        }
    }

    /// `self` then `other` as a product: `other` acts first.
    pub fn then(&self, other: &ToggleWord) -> Self {
        Self {
            toggles: self.toggles.iter().chain(&other.toggles).copied().collect(),
        }
    }

    pub fn names<'a>(&self, poset: &'a Poset) -> Vec<&'a str> {
        self.toggles.iter().map(|&p| poset.name(p)).collect()
    }
}

// ---- action tables and orbits ----

/// Position of `f(states[i])` in `states` for every `i`; `states` must be sorted.
/// Fails unless `f` permutes the states.
pub fn action_table<S, F>(states: &[S], f: F) -> Result<Vec<usize>>
where
    S: Ord + Sync,
    F: Fn(&S) -> S + Sync,
{
    let table: Vec<Option<usize>> = states.par_iter().map(|s| states.binary_search(&f(s)).ok()).collect();
    let table: Vec<usize> = table
        .into_iter()
        .collect::<Option<_>>()
        .ok_or_else(|| Error::RelationViolation("action leaves the state set".into()))?;
    let mut hit = vec![false; states.len()];
    for &t in &table {
        if std::mem::replace(&mut hit[t], true) {
            return Err(Error::RelationViolation("action is not a bijection".into()));
        }
    }
    Ok(table)
}

/// Cycles of a permutation table, each starting at its least index, sorted by that index.
pub fn cycles(table: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; table.len()];
    let mut out = Vec::new();
    for start in 0..table.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push(i);
            i = table[i];
        }
        out.push(cycle);
    }
    out
}

/// `a ∘ b` as tables: apply `b` first.
pub fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

pub fn invert(table: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; table.len()];
    for (i, &t) in table.iter().enumerate() {
        inv[t] = i;
    }
    inv
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbit {
    pub length: usize,
    pub representative: serde_json::Value,
}

/// Cycle decomposition of an action on a finite state set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub action: String,
    pub total: usize,
    pub orbits: Vec<Orbit>,
}

impl OrbitReport {
    /// `describe(i)` renders the least state of each orbit.
    pub fn from_table(action: impl Into<String>, table: &[usize], describe: impl Fn(usize) -> serde_json::Value) -> Self {
        let orbits = cycles(table)
            .into_iter()
            .map(|c| Orbit {
                length: c.len(),
                representative: describe(c[0]),
            })
            .collect();
        Self {
            action: action.into(),
            total: table.len(),
            orbits,
        }
    }

    /// Orbit lengths, sorted ascending.
    pub fn lengths(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.orbits.iter().map(|o| o.length).collect();
        v.sort_unstable();
        v
    }

    /// Least common multiple of the orbit lengths: the order of the action.
    pub fn order(&self) -> u64 {
        self.orbits.iter().fold(1u64, |acc, o| lcm(acc, o.length as u64))
    }

    pub fn same_structure(&self, other: &OrbitReport) -> bool {
        self.lengths() == other.lengths()
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Orbits of an action on `J(P)`, refusing more than `budget` ideals.
pub fn orbit_structure<F>(poset: &Poset, action: &str, budget: usize, f: F) -> Result<OrbitReport>
where
    F: Fn(&ElemSet) -> ElemSet + Sync,
{
    let ideals: Vec<ElemSet> = poset.order_ideals_within(budget)?.into_iter().map(OrderIdeal::into_set).collect();
    let table = action_table(&ideals, f)?;
    Ok(OrbitReport::from_table(action, &table, |i| {
        serde_json::Value::from(ideals[i].iter().map(|p| poset.name(p).to_string()).collect::<Vec<_>>())
    }))
}

// ---- conjugation between Coxeter-type products ----

/// Height of each generator in the product `order` (leftmost acts last):
/// `h(i + 1) = h(i) + 1` when `i` appears left of `i + 1`.
fn heights(order: &[usize]) -> Vec<i64> {
    let m = order.len();
    let mut pos = vec![0; m];
    for (at, &g) in order.iter().enumerate() {
        pos[g] = at;
    }
    let mut h = vec![0i64; m];
    for i in 1..m {
        h[i] = h[i - 1] + if pos[i - 1] < pos[i] { 1 } else { -1 };
    }
    h
}

/// A word `c` over generator indices `0..m` with `c · Π_sigma · c⁻¹ = Π_tau`,
/// assuming involutive generators where `g_i` and `g_j` commute for `|i − j| > 1`.
///
/// A generator left of both neighbours can be commuted to the front;
/// conjugating by it moves it to the back, raising its height by 2.
pub fn conjugating_word(sigma: &[usize], tau: &[usize]) -> Vec<usize> {
    let mut h = heights(sigma);
    let target = heights(tau);
    let m = h.len();
    if m == 0 {
        return Vec::new();
    }
    let mut shift = (0..m).map(|i| h[i] - target[i]).max().unwrap_or(0);
    if (shift - (h[0] - target[0])).rem_euclid(2) != 0 {
        shift += 1;
    }
    let goal: Vec<i64> = target.iter().map(|t| t + shift).collect();
    let mut steps = Vec::new();
    loop {
        let next = (0..m).filter(|&i| h[i] < goal[i]).min_by_key(|&i| (h[i], i));
        let Some(s) = next else { break };
        debug_assert!((s == 0 || h[s - 1] > h[s]) && (s + 1 == m || h[s + 1] > h[s]));
        h[s] += 2;
        steps.push(s);
    }
    steps.reverse();
    steps
}

/// Action tables of involutive generators on a common state set.
pub struct Generators<'a> {
    pub tables: &'a [Vec<usize>],
}

impl Generators<'_> {
    fn identity(&self) -> Vec<usize> {
        (0..self.tables.first().map_or(0, Vec::len)).collect()
    }

    /// Table of a product written leftmost-acts-last.
    pub fn product(&self, word: &[usize]) -> Vec<usize> {
        word.iter().rev().fold(self.identity(), |acc, &g| compose(&self.tables[g], &acc))
    }

    /// Involution and far-commutation relations, checked on every state.
    pub fn check_relations(&self) -> Result<()> {
        let id = self.identity();
        for (i, g) in self.tables.iter().enumerate() {
            if compose(g, g) != id {
                return Err(Error::RelationViolation(format!("generator {i} is not an involution")));
            }
            for j in i + 2..self.tables.len() {
                if compose(g, &self.tables[j]) != compose(&self.tables[j], g) {
                    return Err(Error::RelationViolation(format!("generators {i} and {j} do not commute")));
                }
            }
        }
        Ok(())
    }
}

/// [`conjugating_word`] verified against the generator tables.
pub fn build_conjugator(generators: &Generators<'_>, sigma: &[usize], tau: &[usize]) -> Result<Vec<usize>> {
    generators.check_relations()?;
    let word = conjugating_word(sigma, tau);
    let c = generators.product(&word);
    let lhs = compose(&compose(&c, &generators.product(sigma)), &invert(&c));
    if lhs != generators.product(tau) {
        return Err(Error::RelationViolation("conjugator fails on some state".into()));
    }
    Ok(word)
}

/// A toggle word `d` with `d ∘ Row ∘ d⁻¹ = TogPro_H`, verified on every ideal.
///
/// Rowmotion is the product of the row layers; gyration is both the product
/// of odd layers after even layers and of odd levels after even levels.
/// One conjugator moves rowmotion to gyration over the layers, a second moves
/// gyration to toggle-promotion over the levels.
/// Fails with [`Error::LayerGap`] when the layers are not columns.
pub fn row_to_promotion_conjugator(poset: &Poset, order: &ToggleOrder, budget: usize) -> Result<ToggleWord> {
    order.require_column(poset)?;
    let ideals: Vec<ElemSet> = poset.order_ideals_within(budget)?.into_iter().map(OrderIdeal::into_set).collect();
    let layers = row_layers(poset, order)?;
    require_layer_columns(poset, &layers)?;
    let run = |elems: &[usize]| {
        action_table(&ideals, |s| {
            let mut t = s.clone();
            for &p in elems {
                toggle_set(poset, &mut t, p);
            }
            t
        })
    };

    // Over the layers: generator i is layer i + 1.
    let layer_tables = layers.iter().map(|l| run(l)).collect::<Result<Vec<_>>>()?;
    let c = layers.len();
    let row_order: Vec<usize> = (0..c).collect();
    let (odd, even): (Vec<usize>, Vec<usize>) = (0..c).partition(|i| i % 2 == 0);
    let gyr_layers: Vec<usize> = odd.into_iter().chain(even).collect();
    let a = build_conjugator(&Generators { tables: &layer_tables }, &row_order, &gyr_layers)?;

    // Over the levels: generator j is level lo + j.
    let (lo, hi) = order.support().unwrap_or((0, -1));
    let levels: Vec<i64> = (lo..=hi).collect();
    let level_tables = levels.iter().map(|&i| run(order.slice(i))).collect::<Result<Vec<_>>>()?;
    let m = levels.len();
    let (odd, even): (Vec<usize>, Vec<usize>) = (0..m).partition(|&j| levels[j].rem_euclid(2) == 1);
    let gyr_levels: Vec<usize> = odd.into_iter().chain(even).collect();
    let promo: Vec<usize> = (0..m).rev().collect();
    let b = build_conjugator(&Generators { tables: &level_tables }, &gyr_levels, &promo)?;

    let expand = |word: &[usize], parts: &dyn Fn(usize) -> Vec<usize>| ToggleWord {
        toggles: word.iter().flat_map(|&g| parts(g)).collect(),
    };
    let a_word = expand(&a, &|g| layers[g].clone());
    let b_word = expand(&b, &|g| order.slice(levels[g]).to_vec());
    let d = b_word.then(&a_word);

    let d_table = action_table(&ideals, |s| {
        let mut t = s.clone();
        d.apply_set(poset, &mut t);
        t
    })?;
    let row = action_table(&ideals, |s| rowmotion_set(poset, s))?;
    let pro = action_table(&ideals, |s| {
        let mut t = s.clone();
        toggle_promotion_set(poset, order, &mut t);
        t
    })?;
    if compose(&compose(&d_table, &row), &invert(&d_table)) != pro {
        return Err(Error::RelationViolation(
            "conjugated rowmotion differs from toggle-promotion".into(),
        ));
    }
    Ok(d)
}

// ---- Cartesian embeddings ----

/// `H(p) = rk₁(p₁) − rk₂(p₂)` for an order- and rank-preserving embedding
/// `p ↦ (p₁, p₂)` of `P` into `P₁ × P₂`.
pub fn cartesian_toggle_order(poset: &Poset, first: &Poset, second: &Poset, embedding: &[(usize, usize)]) -> Result<ToggleOrder> {
    let r1 = first.rank_function().ok_or(Error::NotRanked)?;
    let r2 = second.rank_function().ok_or(Error::NotRanked)?;
    if embedding.len() != poset.len() {
        return Err(Error::MismatchedContext);
    }
    for &(x, y) in embedding {
        first.check_element(x)?;
        second.check_element(y)?;
    }
    let mut images: Vec<_> = embedding.to_vec();
    images.sort_unstable();
    images.dedup();
    if images.len() != embedding.len() {
        return Err(Error::RelationViolation("embedding is not injective".into()));
    }
    for (a, b) in poset.covers() {
        let ((x1, y1), (x2, y2)) = (embedding[a], embedding[b]);
        let covers = (x1 == x2 && second.is_cover(y1, y2)) || (y1 == y2 && first.is_cover(x1, x2));
        if !covers {
            return Err(Error::NotRankPreserving {
                lower: poset.name(a).to_string(),
                upper: poset.name(b).to_string(),
            });
        }
    }
    let levels = embedding.iter().map(|&(x, y)| r1.get(x) - r2.get(y)).collect();
    let order = ToggleOrder::new(poset, levels)?;
    order.require_column(poset)?;
    Ok(order)
}
