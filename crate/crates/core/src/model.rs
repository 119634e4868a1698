//! Ground sets, menus, linear orders and choice functions.
//!
//! Alternatives are dense indices `0..n` in ground-set label order. A menu is
//! a bitmask over those indices, so every operation that walks all menus is
//! limited to [`MAX_MENU_N`] alternatives.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest ground set for which all `2^n - 1` menus are materialized.
pub const MAX_MENU_N: usize = 20;

/// Largest ground set for exhaustive search over all `n!` linear orders.
pub const MAX_ORDER_N: usize = 8;

/// Index of an alternative in its ground set.
pub type Alt = usize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct GroundSet {
    labels: Vec<String>,
    index: HashMap<String, Alt>,
}

impl GroundSet {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyGroundSet);
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() {
                return Err(Error::EmptyLabel);
            }
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(GroundSet { labels, index })
    }

    /// Ground set labelled `a0, a1, ...`.
    pub fn numbered(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| format!("a{i}")))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, alt: Alt) -> &str {
        &self.labels[alt]
    }

    pub fn index_of(&self, label: &str) -> Result<Alt> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn menu<S: AsRef<str>>(&self, labels: &[S]) -> Result<Menu> {
        let members = labels
            .iter()
            .map(|l| self.index_of(l.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Menu::from_members(self.len(), &members)
    }

    /// Parses a comma-separated best-to-worst label list.
    pub fn parse_order(&self, spec: &str) -> Result<LinearOrder> {
        let ranking = spec
            .split(',')
            .map(|s| self.index_of(s.trim()))
            .collect::<Result<Vec<_>>>()?;
        if ranking.len() != self.len() {
            return Err(Error::InvalidOrder { n: self.len() });
        }
        LinearOrder::new(ranking)
    }

    pub fn menu_labels(&self, menu: Menu) -> Vec<String> {
        menu.members().map(|a| self.labels[a].clone()).collect()
    }

    pub fn order_labels(&self, order: &LinearOrder) -> Vec<String> {
        order.ranking().iter().map(|&a| self.labels[a].clone()).collect()
    }
}

impl TryFrom<Vec<String>> for GroundSet {
    type Error = Error;

    fn try_from(labels: Vec<String>) -> Result<Self> {
        GroundSet::new(labels)
    }
}

impl From<GroundSet> for Vec<String> {
    fn from(g: GroundSet) -> Self {
        g.labels
    }
}

/// Nonempty set of alternatives, stored as a bitmask.
///
/// Menus compare by size, then lexicographically by their sorted members.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Menu(u32);

impl Menu {
    pub fn from_members(n: usize, members: &[Alt]) -> Result<Self> {
        if n > MAX_MENU_N {
            return Err(Error::GroundSetTooLarge { n, max: MAX_MENU_N });
        }
        let mut mask = 0u32;
        for &a in members {
            if a >= n {
                return Err(Error::AlternativeOutOfRange { index: a, n });
            }
            mask |= 1 << a;
        }
        Menu::from_mask(mask)
    }

    pub fn from_mask(mask: u32) -> Result<Self> {
        if mask == 0 {
            Err(Error::EmptyMenu)
        } else {
            Ok(Menu(mask))
        }
    }

    /// The whole ground set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        assert!((1..=MAX_MENU_N).contains(&n));
        Menu(full_mask(n))
    }

    pub fn singleton(a: Alt) -> Self {
        Menu(1 << a)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn contains(self, a: Alt) -> bool {
        a < 32 && self.0 & (1 << a) != 0
    }

    pub fn members(self) -> Members {
        Members(self.0)
    }

    pub fn to_vec(self) -> Vec<Alt> {
        self.members().collect()
    }

    pub fn is_subset_of(self, other: Menu) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersection(self, other: Menu) -> Option<Menu> {
        Menu::from_mask(self.0 & other.0).ok()
    }

    /// Largest member index; used to validate against a ground-set size.
    pub fn max_member(self) -> Alt {
        31 - self.0.leading_zeros() as usize
    }
}

impl Ord for Menu {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.members().cmp(other.members()))
    }
}

impl PartialOrd for Menu {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Menu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, a) in self.members().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("}")
    }
}

/// Ascending iterator over the members of a [`Menu`].
#[derive(Debug, Clone)]
pub struct Members(u32);

impl Iterator for Members {
    type Item = Alt;

    fn next(&mut self) -> Option<Alt> {
        if self.0 == 0 {
            return None;
        }
        let a = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(a)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = self.0.count_ones() as usize;
        (k, Some(k))
    }
}

impl ExactSizeIterator for Members {}

pub(crate) fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// All nonempty menus over `n` alternatives in canonical order.
pub fn all_menus(n: usize) -> Vec<Menu> {
    assert!(n <= MAX_MENU_N, "menu enumeration capped at n = {MAX_MENU_N}");
    let mut menus: Vec<Menu> = (1..=full_mask(n)).map(Menu).collect();
    menus.sort_unstable();
    menus
}

/// Strict linear order, best first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct LinearOrder {
    ranking: Vec<Alt>,
    position: Vec<usize>,
}

impl LinearOrder {
    pub fn new(ranking: Vec<Alt>) -> Result<Self> {
        let n = ranking.len();
        if n == 0 {
            return Err(Error::EmptyGroundSet);
        }
        let mut position = vec![usize::MAX; n];
        for (p, &a) in ranking.iter().enumerate() {
            if a >= n || position[a] != usize::MAX {
                return Err(Error::InvalidOrder { n });
            }
            position[a] = p;
        }
        Ok(LinearOrder { ranking, position })
    }

    /// `0 > 1 > ... > n-1`, i.e. ground-set label order.
    pub fn identity(n: usize) -> Self {
        LinearOrder {
            ranking: (0..n).collect(),
            position: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.ranking.len()
    }

    pub fn ranking(&self) -> &[Alt] {
        &self.ranking
    }

    pub fn position(&self, a: Alt) -> usize {
        self.position[a]
    }

    /// The alternative holding position `p` (0 = best).
    pub fn at(&self, p: usize) -> Alt {
        self.ranking[p]
    }

    pub fn top(&self) -> Alt {
        self.ranking[0]
    }

    pub fn prefers(&self, a: Alt, b: Alt) -> bool {
        self.position[a] < self.position[b]
    }

    pub fn reversed(&self) -> LinearOrder {
        let mut ranking = self.ranking.clone();
        ranking.reverse();
        LinearOrder::new(ranking).expect("reverse of a permutation")
    }
}

impl TryFrom<Vec<usize>> for LinearOrder {
    type Error = Error;

    fn try_from(ranking: Vec<usize>) -> Result<Self> {
        LinearOrder::new(ranking)
    }
}

impl From<LinearOrder> for Vec<usize> {
    fn from(o: LinearOrder) -> Self {
        o.ranking
    }
}

impl fmt::Display for LinearOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, a) in self.ranking.iter().enumerate() {
            if k > 0 {
                f.write_str(">")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// The member of `menu` ranked highest by `order`.
pub fn max_of(menu: Menu, order: &LinearOrder) -> Alt {
    menu.members()
        .min_by_key(|&a| order.position(a))
        .expect("menus are nonempty")
}

/// Total choice function over all nonempty menus of a ground set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChoiceFunction {
    n: usize,
    // indexed by menu mask; slot 0 unused
    picks: Vec<u8>,
}

impl ChoiceFunction {
    /// Builds a choice from a pick rule, checking `pick(A) ∈ A` for every menu.
    pub fn from_fn<F>(n: usize, mut pick: F) -> Result<Self>
    where
        F: FnMut(Menu) -> Alt,
    {
        check_menu_size(n)?;
        let mut picks = vec![0u8; 1usize << n];
        for mask in 1..=full_mask(n) {
            let menu = Menu(mask);
            let p = pick(menu);
            if !menu.contains(p) {
                return Err(Error::PickNotInMenu {
                    row: 0,
                    menu,
                    pick: p,
                });
            }
            picks[mask as usize] = p as u8;
        }
        Ok(ChoiceFunction { n, picks })
    }

    /// The rational choice induced by maximizing `order` on every menu.
    pub fn from_order(order: &LinearOrder) -> Result<Self> {
        Self::from_fn(order.n(), |m| max_of(m, order))
    }

    /// Trusted constructor for census inner loops; `picks` is mask-indexed.
    pub(crate) fn from_raw(n: usize, picks: Vec<u8>) -> Self {
        debug_assert_eq!(picks.len(), 1usize << n);
        debug_assert!((1..picks.len()).all(|m| m as u32 & (1 << picks[m]) != 0));
        ChoiceFunction { n, picks }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pick(&self, menu: Menu) -> Alt {
        self.picks[menu.mask() as usize] as Alt
    }

    pub fn menus(&self) -> Vec<Menu> {
        all_menus(self.n)
    }

    /// `(menu, pick)` rows in canonical menu order.
    pub fn rows(&self) -> Vec<(Menu, Alt)> {
        self.menus().into_iter().map(|m| (m, self.pick(m))).collect()
    }
}

fn check_menu_size(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::EmptyGroundSet)
    } else if n > MAX_MENU_N {
        Err(Error::GroundSetTooLarge { n, max: MAX_MENU_N })
    } else {
        Ok(())
    }
}

/// A pair of distinct menus whose distinct picks both lie in their intersection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Reversal {
    pub menu_a: Menu,
    pub menu_b: Menu,
    pub pick_a: Alt,
    pub pick_b: Alt,
}

impl Reversal {
    pub fn selects(&self, a: Alt) -> bool {
        self.pick_a == a || self.pick_b == a
    }

    pub fn picks(&self) -> (Alt, Alt) {
        (self.pick_a, self.pick_b)
    }
}

/// Non-fatal findings from [`validate_choice`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Warning {
    /// A singleton menu was absent and filled with its only member.
    SingletonCompleted(Alt),
}

/// Checks a raw dataset for totality and membership.
///
/// Rows are numbered from 1 in the order given. Missing singleton menus are
/// filled in and reported as warnings; any other missing menu is an error.
pub fn validate_choice(
    raw: &[(Menu, Alt)],
    ground: &GroundSet,
) -> Result<(ChoiceFunction, Vec<Warning>)> {
    let n = ground.len();
    check_menu_size(n)?;
    let full = full_mask(n);
    let mut picks = vec![0u8; 1usize << n];
    let mut seen_row = vec![0usize; 1usize << n];
    for (k, &(menu, pick)) in raw.iter().enumerate() {
        let row = k + 1;
        if menu.mask() & !full != 0 {
            return Err(Error::AlternativeOutOfRange {
                index: menu.max_member(),
                n,
            });
        }
        if !menu.contains(pick) {
            return Err(Error::PickNotInMenu { row, menu, pick });
        }
        let slot = menu.mask() as usize;
        if seen_row[slot] != 0 {
            return Err(Error::DuplicateMenu {
                menu,
                first_row: seen_row[slot],
                second_row: row,
            });
        }
        seen_row[slot] = row;
        picks[slot] = pick as u8;
    }

    let mut warnings = Vec::new();
    let mut missing = Vec::new();
    for menu in all_menus(n) {
        let slot = menu.mask() as usize;
        if seen_row[slot] != 0 {
            continue;
        }
        if menu.len() == 1 {
            let a = menu.max_member();
            picks[slot] = a as u8;
            warnings.push(Warning::SingletonCompleted(a));
        } else {
            missing.push(menu);
        }
    }
    if !missing.is_empty() {
        return Err(Error::MissingMenu { menus: missing });
    }
    Ok((ChoiceFunction { n, picks }, warnings))
}
