//! Exact isomorphism of finite posets through their Hasse diagrams.

use std::collections::HashMap;

use crate::poset::Poset;

/// True when `map` is a bijection `a -> b` carrying covers onto covers exactly.
pub fn is_isomorphism(a: &Poset, b: &Poset, map: &[usize]) -> bool {
    if a.len() != b.len() || map.len() != a.len() {
        return false;
    }
    let mut seen = vec![false; b.len()];
    for &m in map {
        if m >= b.len() || std::mem::replace(&mut seen[m], true) {
            return false;
        }
    }
    let mut image: Vec<(usize, usize)> = a.covers().into_iter().map(|(x, y)| (map[x], map[y])).collect();
    image.sort_unstable();
    image == b.covers()
}

/// Colour classes refined by neighbour colours until stable.
fn refine(p: &Poset) -> Vec<usize> {
    let (deltas, nus) = (p.deltas(), p.nus());
    let mut colour: Vec<u64> = (0..p.len())
        .map(|x| {
            let key = (
                p.lower_covers(x).len(),
                p.upper_covers(x).len(),
                deltas[x],
                nus[x],
                p.down_set(x).len(),
                p.up_set(x).len(),
            );
            hash_of(&key)
        })
        .collect();
    let mut classes = count_distinct(&colour);
    loop {
        let next: Vec<u64> = (0..p.len())
            .map(|x| {
                let mut lo: Vec<u64> = p.lower_covers(x).iter().map(|&y| colour[y]).collect();
                let mut hi: Vec<u64> = p.upper_covers(x).iter().map(|&y| colour[y]).collect();
                lo.sort_unstable();
                hi.sort_unstable();
                hash_of(&(colour[x], lo, hi))
            })
            .collect();
        let n = count_distinct(&next);
        colour = next;
        if n == classes {
            break;
        }
        classes = n;
    }
    // Hashes are compared across two posets, so keep them as-is.
    colour.into_iter().map(|c| c as usize).collect()
}

fn hash_of<T: std::hash::Hash>(value: &T) -> u64 {
    use std::hash::Hasher;
    // Fixed keys, so colours agree between the two posets.
    let mut h = std::collections::hash_map::DefaultHasher::new();
    value.hash(&mut h);
    h.finish()
}

fn count_distinct(values: &[u64]) -> usize {
    let mut v = values.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

/// Finds an order isomorphism `a -> b`, if one exists.
pub fn find_isomorphism(a: &Poset, b: &Poset) -> Option<Vec<usize>> {
    if a.len() != b.len() || a.covers().len() != b.covers().len() {
        return None;
    }
    let (ca, cb) = (refine(a), refine(b));
    let mut by_colour: HashMap<usize, Vec<usize>> = HashMap::new();
    for (y, &c) in cb.iter().enumerate() {
        by_colour.entry(c).or_default().push(y);
    }
    let mut hist_a: HashMap<usize, usize> = HashMap::new();
    for &c in &ca {
        *hist_a.entry(c).or_default() += 1;
    }
    if hist_a.len() != by_colour.len() || hist_a.iter().any(|(c, n)| by_colour.get(c).map(Vec::len) != Some(*n)) {
        return None;
    }
    // Smallest classes first, then bottom-up so neighbours get pinned early.
    let mut order: Vec<usize> = a.topological_order().to_vec();
    order.sort_by_key(|&x| by_colour[&ca[x]].len());
    let mut map = vec![usize::MAX; a.len()];
    let mut used = vec![false; b.len()];
    if search(a, b, &ca, &by_colour, &order, 0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn search(
    a: &Poset,
    b: &Poset,
    ca: &[usize],
    by_colour: &HashMap<usize, Vec<usize>>,
    order: &[usize],
    depth: usize,
    map: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    let Some(&x) = order.get(depth) else {
        return true;
    };
    for &y in &by_colour[&ca[x]] {
        if used[y] {
            continue;
        }
        let compatible = order[..depth].iter().all(|&z| {
            let w = map[z];
            a.is_cover(z, x) == b.is_cover(w, y)
                && a.is_cover(x, z) == b.is_cover(y, w)
                && a.le(z, x) == b.le(w, y)
                && a.le(x, z) == b.le(y, w)
        });
        if !compatible {
            continue;
        }
        map[x] = y;
        used[y] = true;
        if search(a, b, ca, by_colour, order, depth + 1, map, used) {
            return true;
        }
        used[y] = false;
        map[x] = usize::MAX;
    }
    false
}

pub fn are_isomorphic(a: &Poset, b: &Poset) -> bool {
    find_isomorphism(a, b).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_self_dual() {
        let g = Poset::grid(2, 3);
        let map = find_isomorphism(&g, &g.dual()).unwrap();
        assert!(is_isomorphism(&g, &g.dual(), &map));
    }

    #[test]
    fn products_commute_up_to_isomorphism() {
        let a = Poset::grid(2, 3);
        let b = Poset::grid(3, 2);
        assert!(are_isomorphic(&a, &b));
        assert!(!are_isomorphic(&a, &Poset::chain(6)));
    }

    #[test]
    fn pentagon_maps_and_self_duality() {
        let p = Poset::new(
            ["a", "b", "c", "d", "e"],
            [("a", "b"), ("a", "c"), ("c", "d"), ("d", "e"), ("b", "e")],
        )
        .unwrap();
        assert!(!is_isomorphism(&p, &p, &[1, 0, 2, 3, 4]));
        assert!(is_isomorphism(&p, &p, &[0, 1, 2, 3, 4]));
        assert!(are_isomorphic(&p, &p.dual()));
    }

    #[test]
    fn same_degree_sequence_different_shape() {
        // Two 2-chains versus a V beside a point: same sizes, different shape.
        let a = Poset::new(["a", "b", "c", "d"], [("a", "b"), ("c", "d")]).unwrap();
        let b = Poset::new(["a", "b", "c", "d"], [("a", "b"), ("a", "c")]).unwrap();
        assert!(!are_isomorphic(&a, &b));
    }
}
