//! WARP violations and the selection axioms that pin down the degree of
//! self-punishment.
//!
//! Every axiom here only depends on which pairs of alternatives are
//! co-selected by some reversal. [`ReversalProfile`] computes that pair graph
//! once per choice in `O(n 2^n)` and keeps, for each co-selected pair, the
//! canonically first reversal witnessing it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{all_menus, Alt, ChoiceFunction, Menu, Reversal};

/// Pairwise conflict structure of a choice.
#[derive(Debug, Clone)]
pub struct ReversalProfile {
    n: usize,
    // adjacency[x] has bit y set iff some reversal picks exactly {x, y}
    adjacency: Vec<u32>,
    // first_beat[x * n + y]: first canonical menu with pick x and y available
    first_beat: Vec<Option<Menu>>,
}

impl ReversalProfile {
    pub fn new(c: &ChoiceFunction) -> Self {
        let n = c.n();
        let mut first_beat = vec![None; n * n];
        for menu in all_menus(n) {
            let p = c.pick(menu);
            for y in menu.members().filter(|&y| y != p) {
                first_beat[p * n + y].get_or_insert(menu);
            }
        }
        let mut adjacency = vec![0u32; n];
        for x in 0..n {
            for y in (x + 1)..n {
                if first_beat[x * n + y].is_some() && first_beat[y * n + x].is_some() {
                    adjacency[x] |= 1 << y;
                    adjacency[y] |= 1 << x;
                }
            }
        }
        ReversalProfile {
            n,
            adjacency,
            first_beat,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_reversal(&self) -> bool {
        self.adjacency.iter().any(|&row| row != 0)
    }

    /// Whether some reversal picks exactly `{x, y}`.
    pub fn co_selected(&self, x: Alt, y: Alt) -> bool {
        self.adjacency[x] & (1 << y) != 0
    }

    /// Alternatives co-selected with `x`, as a bitmask.
    pub fn neighbours(&self, x: Alt) -> u32 {
        self.adjacency[x]
    }

    /// Whether every reversal selects some member of `set`.
    pub fn covers(&self, set: u32) -> bool {
        (0..self.n).all(|x| set & (1 << x) != 0 || self.adjacency[x] & !set == 0)
    }

    /// Canonically first reversal whose picks are `{x, y}`.
    pub fn first_reversal(&self, x: Alt, y: Alt) -> Option<Reversal> {
        let a = self.first_beat[x * self.n + y]?;
        let b = self.first_beat[y * self.n + x]?;
        let (menu_a, pick_a, menu_b, pick_b) = if a < b { (a, x, b, y) } else { (b, y, a, x) };
        Some(Reversal {
            menu_a,
            menu_b,
            pick_a,
            pick_b,
        })
    }

    pub fn is_inconsistent(&self) -> bool {
        let full = crate::model::full_mask(self.n);
        (0..self.n).all(|x| self.adjacency[x] == full & !(1 << x))
    }
}

/// Every reversal of `c`, each unordered menu pair once, sorted by
/// `(menu_a, menu_b)` with `menu_a < menu_b` in canonical menu order.
pub fn find_reversals(c: &ChoiceFunction) -> Vec<Reversal> {
    let n = c.n();
    // beats[x * n + y]: menus picking x while y is available
    let mut beats: Vec<Vec<Menu>> = vec![Vec::new(); n * n];
    for menu in all_menus(n) {
        let p = c.pick(menu);
        for y in menu.members().filter(|&y| y != p) {
            beats[p * n + y].push(menu);
        }
    }
    let mut out = Vec::new();
    for x in 0..n {
        for y in (x + 1)..n {
            for &a in &beats[x * n + y] {
                for &b in &beats[y * n + x] {
                    out.push(if a < b {
                        Reversal { menu_a: a, menu_b: b, pick_a: x, pick_b: y }
                    } else {
                        Reversal { menu_a: b, menu_b: a, pick_a: y, pick_b: x }
                    });
                }
            }
        }
    }
    out.sort_by_key(|r| (r.menu_a, r.menu_b));
    out
}

pub fn satisfies_warp(c: &ChoiceFunction) -> bool {
    !ReversalProfile::new(c).has_reversal()
}

/// Items selected in every reversal, or `None` when WARP holds or no such
/// item exists.
pub fn constant_selection_witnesses(c: &ChoiceFunction) -> Option<Vec<Alt>> {
    constant_selection_from(&ReversalProfile::new(c))
}

pub(crate) fn constant_selection_from(profile: &ReversalProfile) -> Option<Vec<Alt>> {
    if !profile.has_reversal() {
        return None;
    }
    let out: Vec<Alt> = (0..profile.n())
        .filter(|&x| profile.covers(1 << x))
        .collect();
    (!out.is_empty()).then_some(out)
}

/// Witness for constant nonreciprocal selection of `j` items.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnsWitness {
    pub witness_set: Vec<Alt>,
    /// `paired_reversals[h]` selects `witness_set[h]` and an item outside the set.
    pub paired_reversals: Vec<Reversal>,
}

impl CnsWitness {
    pub fn j(&self) -> usize {
        self.witness_set.len()
    }

    pub fn mask(&self) -> u32 {
        self.witness_set.iter().fold(0, |m, &x| m | (1 << x))
    }
}

pub fn check_cns(c: &ChoiceFunction, j: usize) -> Result<Option<CnsWitness>> {
    check_cns_from(&ReversalProfile::new(c), j)
}

pub(crate) fn check_cns_from(profile: &ReversalProfile, j: usize) -> Result<Option<CnsWitness>> {
    let n = profile.n();
    if j == 0 || j >= n {
        return Err(Error::InvalidJ {
            j,
            max: n.saturating_sub(1),
        });
    }
    if !no_cover_below(profile, j) {
        return Ok(None);
    }
    // (ii): first j-subset, lexicographically, that covers and pairs off
    let mut found = None;
    for_each_combination(n, j, |set| {
        found = witness_for(profile, set);
        found.is_some()
    });
    Ok(found)
}

/// Condition (i): no set of fewer than `j` items, the empty set included,
/// meets every reversal.
fn no_cover_below(profile: &ReversalProfile, j: usize) -> bool {
    let full = crate::model::full_mask(profile.n());
    !(0..=full)
        .filter(|d: &u32| (d.count_ones() as usize) < j)
        .any(|d| profile.covers(d))
}

/// Condition (ii) for one ordered candidate set.
fn witness_for(profile: &ReversalProfile, set: &[Alt]) -> Option<CnsWitness> {
    let n = profile.n();
    let mask = set.iter().fold(0u32, |m, &x| m | (1 << x));
    if !profile.covers(mask) {
        return None;
    }
    let paired = set
        .iter()
        .map(|&x| {
            (0..n)
                .filter(|&y| mask & (1 << y) == 0)
                .filter_map(|y| profile.first_reversal(x, y))
                .min_by_key(|r| (r.menu_a, r.menu_b))
        })
        .collect::<Option<Vec<_>>>()?;
    Some(CnsWitness {
        witness_set: set.to_vec(),
        paired_reversals: paired,
    })
}

/// Checks a caller-supplied witness set, kept in the given order, against
/// both conditions at `j = set.len()`.
pub fn cns_witness_for_set(c: &ChoiceFunction, set: &[Alt]) -> Option<CnsWitness> {
    let profile = ReversalProfile::new(c);
    let n = profile.n();
    let mut seen = 0u32;
    for &x in set {
        if x >= n || seen & (1 << x) != 0 {
            return None;
        }
        seen |= 1 << x;
    }
    if set.is_empty() || set.len() >= n || !no_cover_below(&profile, set.len()) {
        return None;
    }
    witness_for(&profile, set)
}

/// Calls `f` on each `k`-subset of `0..n` in lexicographic order until it
/// returns `true`.
pub(crate) fn for_each_combination<F>(n: usize, k: usize, mut f: F)
where
    F: FnMut(&[usize]) -> bool,
{
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if f(&idx) {
            return;
        }
        let Some(pos) = (0..k).rev().find(|&p| idx[p] < n - k + p) else {
            return;
        };
        idx[pos] += 1;
        for q in pos + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

pub fn is_inconsistent(c: &ChoiceFunction) -> bool {
    ReversalProfile::new(c).is_inconsistent()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::LinearOrder;

    #[test]
    fn example4_has_exactly_one_reversal() {
        let (g, c) = fixtures::example4();
        let revs = find_reversals(&c);
        assert_eq!(revs.len(), 1);
        let r = revs[0];
        assert_eq!(r.menu_a, g.menu(&["x", "y"]).unwrap());
        assert_eq!(r.menu_b, g.menu(&["x", "y", "z"]).unwrap());
        assert_eq!(r.picks(), (g.index_of("y").unwrap(), g.index_of("x").unwrap()));
        assert!(!satisfies_warp(&c));
    }

    #[test]
    fn rational_choice_has_no_reversals() {
        let o = LinearOrder::new(vec![2, 0, 3, 1]).unwrap();
        let c = ChoiceFunction::from_order(&o).unwrap();
        assert!(find_reversals(&c).is_empty());
        assert!(satisfies_warp(&c));
        assert_eq!(constant_selection_witnesses(&c), None);
        assert!(!is_inconsistent(&c));
    }

    #[test]
    fn example5_every_pair_co_selected() {
        let (_, c) = fixtures::example5();
        let revs = find_reversals(&c);
        for x in 0..4 {
            for y in (x + 1)..4 {
                assert!(
                    revs.iter().any(|r| r.selects(x) && r.selects(y)),
                    "pair {x},{y}"
                );
            }
        }
        assert!(is_inconsistent(&c));
    }

    #[test]
    fn donation_violates_warp_with_constant_zero() {
        let (g, c) = fixtures::example1();
        assert!(!satisfies_warp(&c));
        let revs = find_reversals(&c);
        let zero = g.index_of("0").unwrap();
        assert!(revs.contains(&ReversalProfile::new(&c).first_reversal(zero, 1).unwrap()));
        assert_eq!(constant_selection_witnesses(&c), Some(vec![zero]));
    }

    #[test]
    fn example4_constant_selection_is_x_and_y() {
        let (_, c) = fixtures::example4();
        assert_eq!(constant_selection_witnesses(&c), Some(vec![0, 1]));
        assert!(!is_inconsistent(&c));
    }

    #[test]
    fn cns_on_fixtures() {
        let (_, c4) = fixtures::example4();
        let w = check_cns(&c4, 1).unwrap().unwrap();
        assert_eq!(w.witness_set, vec![0]);
        assert_eq!(w.paired_reversals, find_reversals(&c4));
        assert_eq!(check_cns(&c4, 2).unwrap(), None);

        let (_, c5) = fixtures::example5();
        let w = check_cns(&c5, 3).unwrap().unwrap();
        assert_eq!(w.j(), 3);
        assert_eq!(check_cns(&c5, 1).unwrap(), None);
        assert_eq!(check_cns(&c5, 2).unwrap(), None);
    }

    #[test]
    fn cns_rejects_bad_j() {
        let (_, c) = fixtures::example4();
        assert_eq!(check_cns(&c, 0), Err(Error::InvalidJ { j: 0, max: 2 }));
        assert_eq!(check_cns(&c, 3), Err(Error::InvalidJ { j: 3, max: 2 }));
    }

    #[test]
    fn combinations_are_lexicographic() {
        let mut seen = Vec::new();
        for_each_combination(4, 2, |s| {
            seen.push(s.to_vec());
            false
        });
        assert_eq!(
            seen,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
    }

    #[test]
    fn profile_agrees_with_explicit_reversals() {
        let (_, c) = fixtures::example3();
        let p = ReversalProfile::new(&c);
        let revs = find_reversals(&c);
        for x in 0..4 {
            for y in 0..4 {
                if x == y {
                    continue;
                }
                let explicit = revs.iter().any(|r| r.selects(x) && r.selects(y));
                assert_eq!(p.co_selected(x, y), explicit);
                if let Some(r) = p.first_reversal(x, y) {
                    let first = revs.iter().find(|r| r.selects(x) && r.selects(y)).unwrap();
                    assert_eq!(&r, first);
                }
            }
        }
    }
}
