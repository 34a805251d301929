//! Finite posets given by their cover relations.
//!
//! Elements carry opaque string names but every structure is indexed by the
//! element's position in the construction list. The full order relation is
//! kept as per-element down-sets and up-sets so comparability, down-closure
//! and toggling are word operations.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, VecDeque};

use log::warn;

use crate::bits::ElemSet;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Poset {
    names: Vec<String>,
    index: HashMap<String, usize>,
    lower: Vec<Vec<usize>>,
    upper: Vec<Vec<usize>>,
    /// `down[p]` holds every `s <= p`, including `p`.
    down: Vec<ElemSet>,
    /// `up[p]` holds every `t >= p`, including `p`.
    up: Vec<ElemSet>,
    topo: Vec<usize>,
    dropped: Vec<(usize, usize)>,
}

/// A down-closed subset of a poset.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderIdeal(ElemSet);

impl OrderIdeal {
    pub fn as_set(&self) -> &ElemSet {
        &self.0
    }

    pub fn into_set(self) -> ElemSet {
        self.0
    }

    pub fn contains(&self, p: usize) -> bool {
        self.0.contains(p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter()
    }

    /// Wraps a set the caller already knows to be down-closed.
    pub(crate) fn from_set_unchecked(set: ElemSet) -> Self {
        Self(set)
    }
}

/// Integer rank with `rk(upper) = rk(lower) + 1` across every cover,
/// normalized to minimum 0 on each connected component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankFunction(Vec<i64>);

impl RankFunction {
    pub fn get(&self, p: usize) -> i64 {
        self.0[p]
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }
}

impl Poset {
    /// Builds a poset from element names and `(lower, upper)` cover pairs.
    ///
    /// Pairs implied transitively by the others are dropped with a warning;
    /// see [`Poset::dropped_covers`].
    pub fn new<S, A, B>(elements: impl IntoIterator<Item = S>, covers: impl IntoIterator<Item = (A, B)>) -> Result<Self>
    where
        S: Into<String>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let names: Vec<String> = elements.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateElement(name.clone()));
            }
        }
        let lookup = |name: &str| index.get(name).copied().ok_or_else(|| Error::UnknownElement(name.to_string()));
        let mut edges = Vec::new();
        for (a, b) in covers {
            let (lo, hi) = (lookup(a.as_ref())?, lookup(b.as_ref())?);
            if lo == hi {
                return Err(Error::Cycle(names[lo].clone()));
            }
            edges.push((lo, hi));
        }
        Self::from_edges(names, index, edges)
    }

    /// Builds a poset from positional cover pairs, names given separately.
    pub fn from_index_covers(names: Vec<String>, covers: &[(usize, usize)]) -> Result<Self> {
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateElement(name.clone()));
            }
        }
        for &(a, b) in covers {
            for x in [a, b] {
                if x >= names.len() {
                    return Err(Error::UnknownElement(format!("#{x}")));
                }
            }
            if a == b {
                return Err(Error::Cycle(names[a].clone()));
            }
        }
        Self::from_edges(names, index, covers.to_vec())
    }

    fn from_edges(names: Vec<String>, index: HashMap<String, usize>, mut edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = names.len();
        edges.sort_unstable();
        edges.dedup();

        let mut preds = vec![Vec::new(); n];
        let mut succs = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for &(a, b) in &edges {
            preds[b].push(a);
            succs[a].push(b);
            indeg[b] += 1;
        }

        let mut heap: BinaryHeap<Reverse<usize>> = (0..n).filter(|&i| indeg[i] == 0).map(Reverse).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(Reverse(v)) = heap.pop() {
            topo.push(v);
            for &w in &succs[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    heap.push(Reverse(w));
                }
            }
        }
        if topo.len() != n {
            let culprit = (0..n).find(|&i| indeg[i] > 0).unwrap_or(0);
            return Err(Error::Cycle(names[culprit].clone()));
        }

        let mut down: Vec<ElemSet> = (0..n).map(|i| ElemSet::from_indices(n, [i])).collect();
        for &v in &topo {
            let mut acc = down[v].clone();
            for &p in &preds[v] {
                acc.union_with(&down[p]);
            }
            down[v] = acc;
        }

        let mut lower = vec![Vec::new(); n];
        let mut upper = vec![Vec::new(); n];
        let mut dropped = Vec::new();
        for &(a, b) in &edges {
            let implied = preds[b].iter().any(|&m| m != a && down[m].contains(a));
            if implied {
                warn!("dropping redundant cover {} < {}", names[a], names[b]);
                dropped.push((a, b));
            } else {
                lower[b].push(a);
                upper[a].push(b);
            }
        }

        let mut up: Vec<ElemSet> = (0..n).map(|_| ElemSet::empty(n)).collect();
        for (v, d) in down.iter().enumerate() {
            for s in d.iter() {
                up[s].insert(v);
            }
        }

        Ok(Self {
            names,
            index,
            lower,
            upper,
            down,
            up,
            topo,
            dropped,
        })
    }

    /// Builds a poset from a full order relation `le(a, b)` by taking the
    /// transitive reduction. `le` must already be a partial order.
    pub fn from_relation(names: Vec<String>, le: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = names.len();
        let lt: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| a != b && le(a, b)).collect()).collect();
        let mut covers = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if lt[a][b] && !(0..n).any(|c| lt[a][c] && lt[c][b]) {
                    covers.push((a, b));
                }
            }
        }
        Self::from_index_covers(names, &covers)
    }

    pub fn empty() -> Self {
        Self::from_index_covers(Vec::new(), &[]).expect("empty poset")
    }

    /// The chain `1 < 2 < ... < n`.
    pub fn chain(n: usize) -> Self {
        let names = (1..=n).map(|i| i.to_string()).collect();
        let covers: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_index_covers(names, &covers).expect("chain is acyclic")
    }

    pub fn antichain(n: usize) -> Self {
        Self::from_index_covers((1..=n).map(|i| i.to_string()).collect(), &[]).expect("antichain")
    }

    /// The product of chains `[a] x [b]`.
    pub fn grid(a: usize, b: usize) -> Self {
        Self::chain(a).cartesian_product(&Self::chain(b))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, p: usize) -> &str {
        &self.names[p]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub(crate) fn check_element(&self, p: usize) -> Result<()> {
        if p < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownElement(format!("#{p}")))
        }
    }

    pub fn lower_covers(&self, p: usize) -> &[usize] {
        &self.lower[p]
    }

    pub fn upper_covers(&self, p: usize) -> &[usize] {
        &self.upper[p]
    }

    /// Every cover pair `(lower, upper)`, sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = self
            .upper
            .iter()
            .enumerate()
            .flat_map(|(a, ups)| ups.iter().map(move |&b| (a, b)))
            .collect();
        out.sort_unstable();
        out
    }

    /// Cover pairs removed during construction because other pairs imply them.
    pub fn dropped_covers(&self) -> &[(usize, usize)] {
        &self.dropped
    }

    pub fn is_cover(&self, a: usize, b: usize) -> bool {
        self.upper[a].contains(&b)
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.down[b].contains(a)
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.le(a, b)
    }

    pub fn down_set(&self, p: usize) -> &ElemSet {
        &self.down[p]
    }

    pub fn up_set(&self, p: usize) -> &ElemSet {
        &self.up[p]
    }

    /// A fixed linear extension, as a list of positions from bottom to top.
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&p| self.lower[p].is_empty()).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&p| self.upper[p].is_empty()).collect()
    }

    /// Poset with every relation reversed; element order is kept.
    pub fn dual(&self) -> Self {
        let covers: Vec<_> = self.covers().into_iter().map(|(a, b)| (b, a)).collect();
        Self::from_index_covers(self.names.clone(), &covers).expect("dual of a poset is a poset")
    }

    // ---- order ideals ----

    pub fn is_order_ideal(&self, set: &ElemSet) -> bool {
        set.iter().all(|p| self.down[p].is_subset(set))
    }

    pub fn ideal(&self, set: ElemSet) -> Result<OrderIdeal> {
        for p in set.iter() {
            if p >= self.len() {
                return Err(Error::UnknownElement(format!("#{p}")));
            }
            if !self.down[p].is_subset(&set) {
                return Err(Error::NotAnIdeal(self.names[p].clone()));
            }
        }
        Ok(OrderIdeal(set))
    }

    pub fn ideal_from_names<S: AsRef<str>>(&self, names: impl IntoIterator<Item = S>) -> Result<OrderIdeal> {
        let mut set = ElemSet::empty(self.len());
        for name in names {
            set.insert(self.index_of(name.as_ref())?);
        }
        self.ideal(set)
    }

    pub fn empty_ideal(&self) -> OrderIdeal {
        OrderIdeal(ElemSet::empty(self.len()))
    }

    pub fn full_ideal(&self) -> OrderIdeal {
        OrderIdeal(ElemSet::full(self.len()))
    }

    pub fn down_closure(&self, generators: impl IntoIterator<Item = usize>) -> OrderIdeal {
        let mut set = ElemSet::empty(self.len());
        for g in generators {
            set.union_with(&self.down[g]);
        }
        OrderIdeal(set)
    }

    /// Every order ideal, sorted lexicographically by membership bitstring.
    pub fn order_ideals(&self) -> Vec<OrderIdeal> {
        let mut out = Vec::new();
        self.visit_ideals(usize::MAX, |set| out.push(OrderIdeal(set.clone())));
        out
    }

    /// Like [`Poset::order_ideals`] but fails once more than `budget` ideals exist.
    pub fn order_ideals_within(&self, budget: usize) -> Result<Vec<OrderIdeal>> {
        let mut out = Vec::new();
        let complete = self.visit_ideals(budget, |set| out.push(OrderIdeal(set.clone())));
        if complete {
            Ok(out)
        } else {
            Err(Error::BudgetExceeded { budget })
        }
    }

    pub fn count_order_ideals(&self) -> usize {
        let mut count = 0usize;
        self.visit_ideals(usize::MAX, |_| count += 1);
        count
    }

    /// Depth-first over elements in list order; taking an element forces its
    /// down-set in, rejecting it forces its up-set out, so every leaf is an
    /// ideal and no branch dies. Returns false if the budget was hit.
    fn visit_ideals(&self, budget: usize, mut emit: impl FnMut(&ElemSet)) -> bool {
        let n = self.len();
        let mut emitted = 0usize;
        let mut stack = vec![(0usize, ElemSet::empty(n), ElemSet::empty(n))];
        while let Some((mut i, inside, outside)) = stack.pop() {
            while i < n && (inside.contains(i) || outside.contains(i)) {
                i += 1;
            }
            if i == n {
                if emitted == budget {
                    return false;
                }
                emitted += 1;
                emit(&inside);
                continue;
            }
            // Push the "in" branch first so the "out" branch is visited first.
            if !self.down[i].intersects(&outside) {
                let mut with = inside.clone();
                with.union_with(&self.down[i]);
                stack.push((i + 1, with, outside.clone()));
            }
            let mut without = outside;
            without.union_with(&self.up[i]);
            stack.push((i + 1, inside, without));
        }
        true
    }

    // ---- chains ----

    /// Number of elements below `p` on a longest chain through `p`.
    pub fn delta(&self, p: usize) -> Result<usize> {
        self.check_element(p)?;
        Ok(self.deltas()[p])
    }

    /// Number of elements above `p` on a longest chain through `p`.
    pub fn nu(&self, p: usize) -> Result<usize> {
        self.check_element(p)?;
        Ok(self.nus()[p])
    }

    pub fn deltas(&self) -> Vec<usize> {
        let mut d = vec![0usize; self.len()];
        for &v in &self.topo {
            d[v] = self.lower[v].iter().map(|&l| d[l] + 1).max().unwrap_or(0);
        }
        d
    }

    pub fn nus(&self) -> Vec<usize> {
        let mut u = vec![0usize; self.len()];
        for &v in self.topo.iter().rev() {
            u[v] = self.upper[v].iter().map(|&h| u[h] + 1).max().unwrap_or(0);
        }
        u
    }

    /// Number of elements on a longest chain (0 for the empty poset).
    pub fn height(&self) -> usize {
        self.deltas().iter().map(|d| d + 1).max().unwrap_or(0)
    }

    /// Every order-preserving bijection onto `1..=n`, as `labels[p]`.
    pub fn linear_extensions(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut out = Vec::new();
        let mut labels = vec![0usize; n];
        let mut pending: Vec<usize> = (0..n).map(|p| self.lower[p].len()).collect();
        self.extend_linear(1, &mut labels, &mut pending, &mut out);
        out
    }

    fn extend_linear(&self, next: usize, labels: &mut Vec<usize>, pending: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if next > self.len() {
            out.push(labels.clone());
            return;
        }
        for p in 0..self.len() {
            if labels[p] == 0 && pending[p] == 0 {
                labels[p] = next;
                for &u in &self.upper[p] {
                    pending[u] -= 1;
                }
                self.extend_linear(next + 1, labels, pending, out);
                for &u in &self.upper[p] {
                    pending[u] += 1;
                }
                labels[p] = 0;
            }
        }
    }

    // ---- products and ranks ----

    /// `P1 x P2` with elements named `(x,y)`, listed row-major.
    pub fn cartesian_product(&self, other: &Poset) -> Poset {
        let m = other.len();
        let names = self
            .names
            .iter()
            .flat_map(|x| other.names.iter().map(move |y| format!("({x},{y})")))
            .collect();
        let mut covers = Vec::new();
        for x in 0..self.len() {
            for y in 0..m {
                for &y2 in &other.upper[y] {
                    covers.push((x * m + y, x * m + y2));
                }
                for &x2 in &self.upper[x] {
                    covers.push((x * m + y, x2 * m + y));
                }
            }
        }
        Poset::from_index_covers(names, &covers).expect("product of posets is a poset")
    }

    /// Connected components of the cover graph, each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &w in self.lower[v].iter().chain(&self.upper[v]) {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                        queue.push_back(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// A rank function normalized per component, or `None` if the poset is not ranked.
    pub fn rank_function(&self) -> Option<RankFunction> {
        let n = self.len();
        let mut rank: Vec<Option<i64>> = vec![None; n];
        for comp in self.components() {
            let start = comp[0];
            rank[start] = Some(0);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                let r = rank[v].expect("visited");
                let steps = self.lower[v]
                    .iter()
                    .map(|&w| (w, r - 1))
                    .chain(self.upper[v].iter().map(|&w| (w, r + 1)));
                for (w, want) in steps {
                    match rank[w] {
                        None => {
                            rank[w] = Some(want);
                            queue.push_back(w);
                        }
                        Some(have) if have != want => return None,
                        Some(_) => {}
                    }
                }
            }
            let low = comp.iter().map(|&p| rank[p].expect("ranked")).min().unwrap_or(0);
            for &p in &comp {
                rank[p] = rank[p].map(|r| r - low);
            }
        }
        Some(RankFunction(rank.into_iter().map(|r| r.expect("every element ranked")).collect()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn figure_one() -> Poset {
        Poset::new(
            ["a", "b", "c", "d", "e"],
            [("a", "b"), ("a", "c"), ("c", "d"), ("d", "e"), ("b", "e")],
        )
        .unwrap()
    }

    fn brute_force_ideals(p: &Poset) -> usize {
        let n = p.len();
        (0u64..1 << n)
            .filter(|mask| (0..n).all(|t| mask >> t & 1 == 0 || (0..n).all(|s| !p.le(s, t) || mask >> s & 1 == 1)))
            .count()
    }

    #[test]
    fn singleton_and_empty() {
        let p = Poset::new(["a"], Vec::<(&str, &str)>::new()).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.delta(0), Ok(0));
        assert_eq!(p.nu(0), Ok(0));
        let e = Poset::empty();
        assert_eq!(e.order_ideals(), vec![e.empty_ideal()]);
    }

    #[test]
    fn figure_one_has_two_saturated_chains_to_top() {
        let p = figure_one();
        let (a, e) = (p.index_of("a").unwrap(), p.index_of("e").unwrap());
        assert!(p.lt(a, e));
        assert!(!p.is_cover(a, e));
        assert_eq!(p.covers().len(), 5);
    }

    #[test]
    fn rejects_cycles_and_unknowns() {
        assert_eq!(
            Poset::new(["a", "b"], [("a", "b"), ("b", "a")]).unwrap_err(),
            Error::Cycle("a".into())
        );
        assert_eq!(Poset::new(["a"], [("a", "a")]).unwrap_err(), Error::Cycle("a".into()));
        assert_eq!(Poset::new(["a"], [("a", "z")]).unwrap_err(), Error::UnknownElement("z".into()));
        assert_eq!(
            Poset::new(["a", "a"], Vec::<(&str, &str)>::new()).unwrap_err(),
            Error::DuplicateElement("a".into())
        );
    }

    #[test]
    fn redundant_covers_are_dropped() {
        let p = Poset::new(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")]).unwrap();
        assert_eq!(p.covers(), vec![(0, 1), (1, 2)]);
        assert_eq!(p.dropped_covers(), &[(0, 2)]);
        assert!(p.lt(0, 2));
    }

    #[test]
    fn ideal_counts() {
        assert_eq!(Poset::chain(3).order_ideals().len(), 4);
        assert_eq!(Poset::grid(2, 2).order_ideals().len(), 6);
        assert_eq!(brute_force_ideals(&Poset::grid(2, 2)), 6);
        let g = Poset::grid(2, 3);
        assert_eq!(g.len(), 6);
        assert_eq!(g.covers().len(), 7);
        assert_eq!(g.count_order_ideals(), brute_force_ideals(&g));
        assert_eq!(brute_force_ideals(&g), 10);
    }

    #[test]
    fn ideals_are_sorted_and_down_closed() {
        let p = figure_one();
        let ideals = p.order_ideals();
        assert!(ideals.windows(2).all(|w| w[0] < w[1]));
        assert!(ideals.iter().all(|i| p.is_order_ideal(i.as_set())));
        assert_eq!(ideals.len(), brute_force_ideals(&p));
    }

    #[test]
    fn ideal_budget() {
        let p = Poset::antichain(5);
        assert_eq!(p.order_ideals_within(32).unwrap().len(), 32);
        assert_eq!(p.order_ideals_within(31), Err(Error::BudgetExceeded { budget: 31 }));
    }

    #[test]
    fn delta_nu_on_figure_four() {
        let p = Poset::new(["a", "b", "c", "d", "e"], [("a", "d"), ("a", "c"), ("c", "e"), ("b", "e")]).unwrap();
        let idx = |s| p.index_of(s).unwrap();
        assert_eq!((p.delta(idx("a")), p.nu(idx("a"))), (Ok(0), Ok(2)));
        assert_eq!((p.delta(idx("e")), p.nu(idx("e"))), (Ok(2), Ok(0)));
        assert_eq!((p.delta(idx("b")), p.nu(idx("b"))), (Ok(0), Ok(1)));
        assert_eq!(p.delta(9), Err(Error::UnknownElement("#9".into())));
    }

    #[test]
    fn linear_extension_counts() {
        assert_eq!(Poset::chain(3).linear_extensions().len(), 1);
        assert_eq!(Poset::antichain(3).linear_extensions().len(), 6);
        let g = Poset::grid(2, 2);
        let brute = permutations(4)
            .into_iter()
            .filter(|perm| g.covers().iter().all(|&(a, b)| perm[a] < perm[b]))
            .count();
        assert_eq!(brute, 2);
        assert_eq!(g.linear_extensions().len(), brute);
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for perm in permutations(n - 1) {
            for pos in 0..n {
                let mut v = perm.clone();
                v.insert(pos, n);
                out.push(v);
            }
        }
        out
    }

    #[test]
    fn products() {
        let p = figure_one();
        let single = p.cartesian_product(&Poset::chain(1));
        assert_eq!(single.covers(), p.covers());
        let diamond = Poset::grid(2, 2);
        assert_eq!((diamond.len(), diamond.covers().len()), (4, 4));
    }

    #[test]
    fn ranks() {
        assert_eq!(Poset::chain(3).rank_function().unwrap().values(), &[0, 1, 2]);
        assert_eq!(Poset::grid(2, 2).rank_function().unwrap().values(), &[0, 1, 1, 2]);
        assert_eq!(figure_one().rank_function(), None);
        // Components are normalized independently.
        let two = Poset::new(["a", "b", "c"], [("b", "c")]).unwrap();
        assert_eq!(two.rank_function().unwrap().values(), &[0, 0, 1]);
    }

    #[test]
    fn dual_has_same_ideal_count() {
        let p = figure_one();
        assert_eq!(p.dual().count_order_ideals(), p.count_order_ideals());
    }
}
