//! Recovering the latent preferences behind a self-punishing choice.

use serde::{Deserialize, Serialize};

use crate::axioms::{constant_selection_witnesses, cns_witness_for_set};
use crate::error::{Error, Result};
use crate::model::{all_menus, full_mask, Alt, ChoiceFunction, LinearOrder, MAX_MENU_N};

/// Irreflexive, transitively closed relation; `before[a]` holds every `b`
/// with `a` strictly before `b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPartialOrder", into = "RawPartialOrder")]
pub struct StrictPartialOrder {
    n: usize,
    before: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct RawPartialOrder {
    n: usize,
    pairs: Vec<(Alt, Alt)>,
}

impl TryFrom<RawPartialOrder> for StrictPartialOrder {
    type Error = Error;

    fn try_from(raw: RawPartialOrder) -> Result<Self> {
        StrictPartialOrder::new(raw.n, &raw.pairs)
    }
}

impl From<StrictPartialOrder> for RawPartialOrder {
    fn from(p: StrictPartialOrder) -> Self {
        RawPartialOrder {
            n: p.n,
            pairs: p.pairs(),
        }
    }
}

impl StrictPartialOrder {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_MENU_N);
        StrictPartialOrder {
            n,
            before: vec![0; n],
        }
    }

    /// Validates `pairs` as an already closed strict partial order.
    pub fn new(n: usize, pairs: &[(Alt, Alt)]) -> Result<Self> {
        let p = Self::relation(n, pairs)?;
        if p.before.iter().enumerate().any(|(a, &row)| row & (1 << a) != 0) {
            return Err(Error::CycleDetected);
        }
        for a in 0..n {
            for b in members(p.before[a]) {
                if p.before[b] & (1 << a) != 0 {
                    return Err(Error::CycleDetected);
                }
                if p.before[b] & !p.before[a] != 0 {
                    return Err(Error::NotTransitive);
                }
            }
        }
        Ok(p)
    }

    /// Transitive closure of `pairs`; fails if the closure is not irreflexive.
    pub fn closure_of(n: usize, pairs: &[(Alt, Alt)]) -> Result<Self> {
        let mut p = Self::relation(n, pairs)?;
        // Warshall on bit rows
        for k in 0..n {
            for a in 0..n {
                if p.before[a] & (1 << k) != 0 {
                    p.before[a] |= p.before[k];
                }
            }
        }
        if p.before.iter().enumerate().any(|(a, &row)| row & (1 << a) != 0) {
            return Err(Error::CycleDetected);
        }
        Ok(p)
    }

    fn relation(n: usize, pairs: &[(Alt, Alt)]) -> Result<Self> {
        if n > MAX_MENU_N {
            return Err(Error::GroundSetTooLarge { n, max: MAX_MENU_N });
        }
        let mut before = vec![0u32; n];
        for &(a, b) in pairs {
            for x in [a, b] {
                if x >= n {
                    return Err(Error::AlternativeOutOfRange { index: x, n });
                }
            }
            before[a] |= 1 << b;
        }
        Ok(StrictPartialOrder { n, before })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn precedes(&self, a: Alt, b: Alt) -> bool {
        self.before[a] & (1 << b) != 0
    }

    /// All `(a, b)` with `a` before `b`, sorted.
    pub fn pairs(&self) -> Vec<(Alt, Alt)> {
        (0..self.n)
            .flat_map(|a| members(self.before[a]).map(move |b| (a, b)))
            .collect()
    }

    pub fn is_extended_by(&self, order: &LinearOrder) -> bool {
        order.n() == self.n && self.pairs().into_iter().all(|(a, b)| order.prefers(a, b))
    }

    fn predecessors(&self) -> Vec<u32> {
        let mut preds = vec![0u32; self.n];
        for (a, b) in self.pairs() {
            preds[b] |= 1 << a;
        }
        preds
    }
}

fn members(mask: u32) -> impl Iterator<Item = Alt> {
    (0..32).filter(move |b| mask & (1 << b) != 0)
}

/// One base order per constant-selection witness: the witness on top, the
/// rest ordered by picks from menus that exclude it.
pub fn elicit_weakly_harmful(c: &ChoiceFunction) -> Result<Vec<LinearOrder>> {
    let witnesses = constant_selection_witnesses(c).ok_or(Error::NotWeaklyHarmful)?;
    let n = c.n();
    let menus = all_menus(n);
    witnesses
        .into_iter()
        .map(|top| {
            let mut beats = vec![0u32; n];
            for &menu in menus.iter().filter(|m| !m.contains(top)) {
                let y = c.pick(menu);
                beats[y] |= menu.mask() & !(1 << y);
            }
            let mut rest: Vec<Alt> = (0..n).filter(|&a| a != top).collect();
            // a complete acyclic tournament is ranked by its out-degrees
            rest.sort_by_key(|&a| std::cmp::Reverse(beats[a].count_ones()));
            let linear = rest.iter().enumerate().all(|(k, &a)| {
                rest[k + 1..]
                    .iter()
                    .all(|&b| beats[a] & (1 << b) != 0 && beats[b] & (1 << a) == 0)
            });
            if !linear {
                return Err(Error::RelationNotLinear);
            }
            let mut ranking = vec![top];
            ranking.extend(rest);
            LinearOrder::new(ranking)
        })
        .collect()
}

/// Partial order revealed by an ordered witness set `x_1, .., x_j`.
pub fn elicit_partial(c: &ChoiceFunction, witness: &[Alt]) -> Result<StrictPartialOrder> {
    if cns_witness_for_set(c, witness).is_none() {
        return Err(Error::InvalidWitness(format!(
            "{witness:?} does not witness constant nonreciprocal selection"
        )));
    }
    let n = c.n();
    let in_witness = witness.iter().fold(0u32, |m, &x| m | (1 << x));
    let outside = full_mask(n) & !in_witness;
    let mut pairs = Vec::new();
    for (g, &xg) in witness.iter().enumerate() {
        pairs.extend(witness[g + 1..].iter().map(|&xh| (xg, xh)));
        pairs.extend(members(outside).map(|y| (xg, y)));
    }
    for menu in all_menus(n) {
        let y = c.pick(menu);
        if outside & (1 << y) == 0 {
            continue;
        }
        pairs.extend(members(menu.mask() & outside & !(1 << y)).map(|z| (y, z)));
    }
    StrictPartialOrder::closure_of(n, &pairs)
}

/// Linear extension taking, at every step, the lowest-indexed available item.
pub fn extend_linear(p: &StrictPartialOrder) -> Result<LinearOrder> {
    let preds = p.predecessors();
    let mut placed = 0u32;
    let mut ranking = Vec::with_capacity(p.n);
    for _ in 0..p.n {
        let next = (0..p.n)
            .find(|&a| placed & (1 << a) == 0 && preds[a] & !placed == 0)
            .ok_or(Error::CycleDetected)?;
        placed |= 1 << next;
        ranking.push(next);
    }
    LinearOrder::new(ranking)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extensions {
    /// Lexicographically first extensions, at most `cap` of them.
    pub orders: Vec<LinearOrder>,
    pub total: u64,
}

pub fn all_extensions(p: &StrictPartialOrder, cap: usize) -> Extensions {
    let preds = p.predecessors();
    let n = p.n;
    // ways[placed]: extensions of the items not yet placed
    let full = full_mask(n);
    let mut ways = vec![0u64; 1usize << n];
    ways[full as usize] = 1;
    for placed in (0..full).rev() {
        if (0..n).any(|a| placed & (1 << a) != 0 && preds[a] & !placed != 0) {
            continue;
        }
        ways[placed as usize] = (0..n)
            .filter(|&a| placed & (1 << a) == 0 && preds[a] & !placed == 0)
            .map(|a| ways[(placed | (1 << a)) as usize])
            .sum();
    }

    let mut orders = Vec::new();
    let mut prefix = Vec::with_capacity(n);
    collect_extensions(n, &preds, 0, &mut prefix, cap.max(1), &mut orders);
    Extensions {
        orders,
        total: ways[0],
    }
}

fn collect_extensions(
    n: usize,
    preds: &[u32],
    placed: u32,
    prefix: &mut Vec<Alt>,
    cap: usize,
    out: &mut Vec<LinearOrder>,
) {
    if out.len() >= cap {
        return;
    }
    if prefix.len() == n {
        out.push(LinearOrder::new(prefix.clone()).expect("complete permutation"));
        return;
    }
    for a in 0..n {
        if placed & (1 << a) == 0 && preds[a] & !placed == 0 {
            prefix.push(a);
            collect_extensions(n, preds, placed | (1 << a), prefix, cap, out);
            prefix.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::check_cns;
    use crate::fixtures;
    use crate::rationalize::min_max_index;

    #[test]
    fn donation_preference_is_recovered() {
        let (g, c) = fixtures::example1();
        let orders = elicit_weakly_harmful(&c).unwrap();
        assert_eq!(orders, vec![g.parse_order("0,5,20").unwrap()]);
    }

    #[test]
    fn example4_yields_two_orders() {
        let (g, c) = fixtures::example4();
        let orders = elicit_weakly_harmful(&c).unwrap();
        assert_eq!(
            orders,
            vec![g.parse_order("x,z,y").unwrap(), g.parse_order("y,x,z").unwrap()]
        );
        for o in &orders {
            assert_eq!(min_max_index(&c, o), 1);
        }
    }

    #[test]
    fn food_preference_is_recovered() {
        let (g, c) = fixtures::example2();
        let orders = elicit_weakly_harmful(&c).unwrap();
        assert_eq!(orders, vec![g.parse_order("l,s,r").unwrap()]);
        assert_eq!(min_max_index(&c, &orders[0]), 1);
    }

    #[test]
    fn not_weakly_harmful_is_rejected() {
        let (_, c) = fixtures::example5();
        assert_eq!(elicit_weakly_harmful(&c), Err(Error::NotWeaklyHarmful));
        let rational = ChoiceFunction::from_order(&LinearOrder::identity(3)).unwrap();
        assert_eq!(elicit_weakly_harmful(&rational), Err(Error::NotWeaklyHarmful));
    }

    #[test]
    fn partial_order_for_example4() {
        let (g, c) = fixtures::example4();
        let [x, y, z] = ["x", "y", "z"].map(|l| g.index_of(l).unwrap());
        let p = elicit_partial(&c, &[x]).unwrap();
        let mut expected = vec![(x, z), (z, y), (x, y)];
        expected.sort();
        assert_eq!(p.pairs(), expected);
        let ext = all_extensions(&p, 10);
        assert_eq!(ext.total, 1);
        assert_eq!(ext.orders, vec![g.parse_order("x,z,y").unwrap()]);
    }

    #[test]
    fn partial_order_for_example2_is_a_chain() {
        let (g, c) = fixtures::example2();
        let l = g.index_of("l").unwrap();
        let p = elicit_partial(&c, &[l]).unwrap();
        assert_eq!(extend_linear(&p).unwrap(), g.parse_order("l,s,r").unwrap());
        assert_eq!(p.pairs().len(), 3);
    }

    #[test]
    fn example5_extensions_all_rationalize_within_three() {
        let (_, c) = fixtures::example5();
        let w = check_cns(&c, 3).unwrap().unwrap();
        let p = elicit_partial(&c, &w.witness_set).unwrap();
        let ext = all_extensions(&p, usize::MAX);
        assert_eq!(ext.total as usize, ext.orders.len());
        for o in &ext.orders {
            assert!(min_max_index(&c, o) <= 3);
        }
    }

    #[test]
    fn invalid_witness_is_rejected() {
        let (_, c) = fixtures::example4();
        assert!(matches!(elicit_partial(&c, &[2]), Err(Error::InvalidWitness(_))));
        assert!(matches!(elicit_partial(&c, &[0, 1]), Err(Error::InvalidWitness(_))));
        assert!(matches!(elicit_partial(&c, &[]), Err(Error::InvalidWitness(_))));
    }

    #[test]
    fn extension_tie_breaks_by_label_order() {
        let chain = StrictPartialOrder::new(3, &[(0, 2), (2, 1), (0, 1)]).unwrap();
        assert_eq!(extend_linear(&chain).unwrap().ranking(), &[0, 2, 1]);
        assert_eq!(extend_linear(&StrictPartialOrder::empty(2)).unwrap().ranking(), &[0, 1]);
        let ac = StrictPartialOrder::new(3, &[(0, 2)]).unwrap();
        assert_eq!(extend_linear(&ac).unwrap().ranking(), &[0, 1, 2]);
    }

    #[test]
    fn extension_counts() {
        let chain = StrictPartialOrder::closure_of(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(all_extensions(&chain, 5).total, 1);
        let empty = all_extensions(&StrictPartialOrder::empty(3), 100);
        assert_eq!(empty.total, 6);
        let got: Vec<Vec<usize>> = empty.orders.iter().map(|o| o.ranking().to_vec()).collect();
        assert_eq!(got[0], vec![0, 1, 2]);
        assert_eq!(got[5], vec![2, 1, 0]);
        assert_eq!(all_extensions(&StrictPartialOrder::empty(3), 2).orders.len(), 2);
    }

    #[test]
    fn partial_order_validation() {
        assert_eq!(StrictPartialOrder::new(2, &[(0, 1), (1, 0)]), Err(Error::CycleDetected));
        assert_eq!(StrictPartialOrder::new(2, &[(0, 0)]), Err(Error::CycleDetected));
        assert_eq!(StrictPartialOrder::new(3, &[(0, 1), (1, 2)]), Err(Error::NotTransitive));
        assert_eq!(StrictPartialOrder::closure_of(3, &[(0, 1), (1, 2), (2, 0)]), Err(Error::CycleDetected));
    }

    #[test]
    fn partial_order_serde_round_trip() {
        let p = StrictPartialOrder::closure_of(4, &[(0, 1), (1, 2)]).unwrap();
        let json = serde_json::to_string(&p).unwrap();
        let back: StrictPartialOrder = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }
}
