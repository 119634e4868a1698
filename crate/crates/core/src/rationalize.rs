//! Rationalizations by self-punishment: one distortion index per menu, all
//! distortions taken from a single base order.

use serde::{Deserialize, Serialize};

use crate::distortion::distorted_position;
use crate::model::{all_menus, full_mask, Alt, ChoiceFunction, LinearOrder, Menu};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfPunishmentRationalization {
    base: LinearOrder,
    // mask-indexed distortion index per menu; slot 0 unused
    menu_index: Vec<u8>,
}

impl SelfPunishmentRationalization {
    /// Builds a rationalization from an index rule. Indices are not checked
    /// against any choice; see [`validate_rationalization`].
    pub fn from_fn<F>(base: LinearOrder, mut index: F) -> Self
    where
        F: FnMut(Menu) -> usize,
    {
        let n = base.n();
        let mut menu_index = vec![0u8; 1usize << n];
        for menu in all_menus(n) {
            let i = index(menu);
            assert!(i < n, "distortion index {i} out of range");
            menu_index[menu.mask() as usize] = i as u8;
        }
        SelfPunishmentRationalization { base, menu_index }
    }

    pub fn base(&self) -> &LinearOrder {
        &self.base
    }

    pub fn index(&self, menu: Menu) -> usize {
        self.menu_index[menu.mask() as usize] as usize
    }

    /// Largest distortion index used over all menus.
    pub fn max_index(&self) -> usize {
        self.menu_index.iter().copied().max().unwrap_or(0) as usize
    }

    /// Distinct indices in use, ascending.
    pub fn indices_used(&self) -> Vec<usize> {
        let mut seen = 0u32;
        for mask in 1..self.menu_index.len() {
            seen |= 1 << self.menu_index[mask];
        }
        (0..self.base.n()).filter(|i| seen & (1 << i) != 0).collect()
    }
}

/// Maximum of `menu` under the `i`-th distortion of `order`.
pub fn distorted_max(menu: Menu, order: &LinearOrder, i: usize) -> Alt {
    menu.members()
        .min_by_key(|&a| distorted_position(order, i, a))
        .expect("menus are nonempty")
}

/// Indexes every menu by the number of alternatives ranked above its pick.
pub fn canonical_rationalization(
    c: &ChoiceFunction,
    order: &LinearOrder,
) -> SelfPunishmentRationalization {
    SelfPunishmentRationalization::from_fn(order.clone(), |menu| order.position(c.pick(menu)))
}

pub fn validate_rationalization(c: &ChoiceFunction, r: &SelfPunishmentRationalization) -> bool {
    r.base.n() == c.n()
        && all_menus(c.n())
            .into_iter()
            .all(|menu| distorted_max(menu, &r.base, r.index(menu)) == c.pick(menu))
}

/// Bitmask of the distortion indices of `order` whose maximum on `menu` is `c(menu)`.
pub fn feasible_indices(c: &ChoiceFunction, order: &LinearOrder, menu: Menu) -> u32 {
    let pick = c.pick(menu);
    (0..order.n())
        .filter(|&i| distorted_max(menu, order, i) == pick)
        .fold(0, |m, i| m | (1 << i))
}

fn smallest_feasible(c: &ChoiceFunction, order: &LinearOrder, menu: Menu) -> usize {
    let pick = c.pick(menu);
    (0..order.n())
        .find(|&i| distorted_max(menu, order, i) == pick)
        .expect("index = number of items above the pick is always feasible")
}

/// Smallest-index rationalization of `c` by `order`.
pub fn minimal_rationalization(
    c: &ChoiceFunction,
    order: &LinearOrder,
) -> SelfPunishmentRationalization {
    SelfPunishmentRationalization::from_fn(order.clone(), |menu| smallest_feasible(c, order, menu))
}

/// Least possible largest index over all rationalizations of `c` by `order`.
pub fn min_max_index(c: &ChoiceFunction, order: &LinearOrder) -> usize {
    min_max_index_within(c, order, order.n()).expect("unbounded search always succeeds")
}

/// As [`min_max_index`], but gives up with `None` as soon as some menu needs
/// an index above `bound`.
pub fn min_max_index_within(c: &ChoiceFunction, order: &LinearOrder, bound: usize) -> Option<usize> {
    let n = c.n();
    let mut worst = 0;
    for mask in 1..=full_mask(n) {
        let menu = Menu::from_mask(mask).expect("nonzero");
        let i = smallest_feasible(c, order, menu);
        if i > bound {
            return None;
        }
        worst = worst.max(i);
    }
    Some(worst)
}

/// Whether every menu is explained by some distortion index in `allowed`.
pub fn explains_with(c: &ChoiceFunction, order: &LinearOrder, allowed: u32) -> bool {
    all_menus(c.n())
        .into_iter()
        .all(|menu| feasible_indices(c, order, menu) & allowed != 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distortion::harm_family;
    use crate::fixtures;
    use crate::model::{max_of, GroundSet};

    // Independent route: materialize every distortion and maximize it.
    fn naive_min_max(c: &ChoiceFunction, order: &LinearOrder) -> usize {
        let fam = harm_family(order);
        all_menus(c.n())
            .into_iter()
            .map(|m| {
                fam.members()
                    .iter()
                    .position(|d| max_of(m, d) == c.pick(m))
                    .unwrap()
            })
            .max()
            .unwrap()
    }

    #[test]
    fn canonical_index_example4() {
        let (g, c) = fixtures::example4();
        let order = g.parse_order("x,z,y").unwrap();
        let r = canonical_rationalization(&c, &order);
        assert_eq!(r.index(g.menu(&["x", "y"]).unwrap()), 2);
        assert!(validate_rationalization(&c, &r));
    }

    #[test]
    fn canonical_index_of_rational_choice() {
        let order = LinearOrder::identity(2);
        let c = ChoiceFunction::from_order(&order).unwrap();
        let r = canonical_rationalization(&c, &order);
        assert_eq!(r.index(Menu::full(2)), 0);
        assert_eq!(r.index(Menu::singleton(1)), 1);
        assert!(validate_rationalization(&c, &r));
        assert_eq!(min_max_index(&c, &order), 0);
    }

    #[test]
    fn stated_family_for_example4() {
        let (g, c) = fixtures::example4();
        let order = g.parse_order("x,z,y").unwrap();
        let xy = g.menu(&["x", "y"]).unwrap();
        let r = SelfPunishmentRationalization::from_fn(order.clone(), |m| usize::from(m == xy));
        assert!(validate_rationalization(&c, &r));
        assert_eq!(r.indices_used(), vec![0, 1]);

        let all_zero = SelfPunishmentRationalization::from_fn(order, |_| 0);
        assert!(!validate_rationalization(&c, &all_zero));
    }

    #[test]
    fn min_max_examples() {
        let (g, c) = fixtures::example4();
        assert_eq!(min_max_index(&c, &g.parse_order("x,z,y").unwrap()), 1);

        let ab = GroundSet::new(["a", "b"]).unwrap();
        let c = ChoiceFunction::from_order(&ab.parse_order("a,b").unwrap()).unwrap();
        assert_eq!(min_max_index(&c, &ab.parse_order("b,a").unwrap()), 1);
    }

    #[test]
    fn min_max_matches_materialized_distortions() {
        for (_, c) in [fixtures::example1(), fixtures::example3(), fixtures::example5()] {
            let n = c.n();
            let mut ranking: Vec<usize> = (0..n).collect();
            for _ in 0..n * 3 {
                let order = LinearOrder::new(ranking.clone()).unwrap();
                assert_eq!(min_max_index(&c, &order), naive_min_max(&c, &order));
                ranking.rotate_left(1);
                ranking.swap(0, n - 1);
            }
        }
    }

    #[test]
    fn bounded_search_gives_up() {
        let (_, c) = fixtures::example5();
        let order = LinearOrder::identity(4);
        let full = min_max_index(&c, &order);
        assert_eq!(min_max_index_within(&c, &order, full), Some(full));
        assert_eq!(min_max_index_within(&c, &order, full - 1), None);
    }

    #[test]
    fn minimal_rationalization_hits_min_max() {
        let (g, c) = fixtures::example3();
        let order = g.parse_order("h,mh,ml,l").unwrap();
        let r = minimal_rationalization(&c, &order);
        assert!(validate_rationalization(&c, &r));
        assert_eq!(r.max_index(), min_max_index(&c, &order));
        assert!(r.max_index() <= 2);
        assert!(explains_with(&c, &order, 0b111));
    }
}
