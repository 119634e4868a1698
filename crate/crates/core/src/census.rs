//! Surveys of choice space and generators of self-punishing choices.
//!
//! All parallel work is split into fixed-size blocks whose results are
//! combined in block order, so reports do not depend on the worker count.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::axioms::ReversalProfile;
use crate::degree::sp_axiomatic_from;
use crate::distortion::distorted_position;
use crate::error::{Error, Result};
use crate::model::{all_menus, full_mask, ChoiceFunction, GroundSet, LinearOrder, Menu, MAX_MENU_N};

/// Largest ground set for [`enumerate_census`].
pub const MAX_EXACT_CENSUS_N: usize = 4;
/// Largest ground set for which sampled reports classify every `sp` value;
/// above it only strong harm is estimated.
pub const MAX_SAMPLED_SP_N: usize = 12;
/// Seed used by randomized commands when none is given.
pub const DEFAULT_SEED: u64 = 0x5eed_c401;

const CENSUS_BLOCK: u64 = 1024;
const SAMPLE_BLOCK: u64 = 4096;
const Z95: f64 = 1.959_963_984_540_054;

/// Number of choice functions on `n` alternatives: the product of menu sizes.
pub fn choice_count(n: usize) -> BigUint {
    let mut total = BigUint::from(1u32);
    for mask in 1..=full_mask(n) {
        total *= mask.count_ones();
    }
    total
}

/// Mixed-radix indexing of every choice function on a small ground set.
///
/// Digit `k` is the pick from the `k`-th non-singleton menu in canonical
/// order, least significant first.
#[derive(Debug, Clone)]
pub struct ChoiceSpace {
    n: usize,
    menus: Vec<Menu>,
    total: u64,
}

impl ChoiceSpace {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGroundSet);
        }
        let total = u64::try_from(choice_count(n))
            .map_err(|_| Error::GroundSetTooLarge { n, max: 5 })?;
        let menus = all_menus(n).into_iter().filter(|m| m.len() > 1).collect();
        Ok(ChoiceSpace { n, menus, total })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn get(&self, mut index: u64) -> ChoiceFunction {
        assert!(index < self.total, "choice index out of range");
        let mut picks = singleton_picks(self.n);
        for menu in &self.menus {
            let k = menu.len() as u64;
            let digit = (index % k) as usize;
            index /= k;
            picks[menu.mask() as usize] = menu.members().nth(digit).expect("digit below size") as u8;
        }
        ChoiceFunction::from_raw(self.n, picks)
    }

    pub fn iter(&self) -> impl Iterator<Item = ChoiceFunction> + '_ {
        (0..self.total).map(|i| self.get(i))
    }

    /// Fixed-size index blocks, in order.
    fn blocks(&self, size: u64) -> impl IndexedParallelIterator<Item = (u64, u64)> + '_ {
        let total = self.total;
        let count = usize::try_from(total.div_ceil(size)).expect("block count fits usize");
        (0..count).into_par_iter().map(move |b| {
            let b = b as u64;
            (b * size, ((b + 1) * size).min(total))
        })
    }
}

fn singleton_picks(n: usize) -> Vec<u8> {
    let mut picks = vec![0u8; 1usize << n];
    for a in 0..n {
        picks[1 << a] = a as u8;
    }
    picks
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CensusMode {
    Exact,
    Sampled,
}

/// Count and share of a class; `half_width` is the 95% normal-approximation
/// half-width in sampled mode and zero in exact mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub count: u64,
    pub fraction: f64,
    pub half_width: f64,
}

impl Estimate {
    fn exact(count: u64, total: u64) -> Self {
        Estimate {
            count,
            fraction: count as f64 / total as f64,
            half_width: 0.0,
        }
    }

    fn sampled(count: u64, samples: u64) -> Self {
        let p = count as f64 / samples as f64;
        Estimate {
            count,
            fraction: p,
            half_width: Z95 * (p * (1.0 - p) / samples as f64).sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub n: usize,
    pub mode: CensusMode,
    /// Exact number of choice functions, in decimal.
    pub total: String,
    /// Per `sp` value; counts choices (exact) or samples (sampled).
    pub by_sp: BTreeMap<usize, Estimate>,
    pub strongly_harmful: Estimate,
    /// `count/total` as an exact ratio (exact mode only).
    pub strongly_harmful_ratio: Option<String>,
    pub seed: Option<u64>,
    pub samples: Option<u64>,
}

impl CensusReport {
    pub fn strongly_harmful_fraction(&self) -> f64 {
        self.strongly_harmful.fraction
    }
}

fn add_counts(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// Exact `sp` distribution over every choice function on `n <= 4` alternatives.
pub fn enumerate_census(n: usize) -> Result<CensusReport> {
    if n > MAX_EXACT_CENSUS_N {
        return Err(Error::GroundSetTooLarge {
            n,
            max: MAX_EXACT_CENSUS_N,
        });
    }
    let space = ChoiceSpace::new(n)?;
    let counts = space
        .blocks(CENSUS_BLOCK)
        .map(|(lo, hi)| {
            let mut counts = vec![0u64; n];
            for index in lo..hi {
                let profile = ReversalProfile::new(&space.get(index));
                let sp = sp_axiomatic_from(&profile)?.sp;
                counts[sp] += 1;
            }
            Ok(counts)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(vec![0u64; n], add_counts);

    let total = space.len();
    debug_assert_eq!(counts.iter().sum::<u64>(), total);
    let strong = if n >= 2 { counts[n - 1] } else { 0 };
    Ok(CensusReport {
        n,
        mode: CensusMode::Exact,
        total: total.to_string(),
        by_sp: counts
            .iter()
            .enumerate()
            .map(|(sp, &k)| (sp, Estimate::exact(k, total)))
            .collect(),
        strongly_harmful: Estimate::exact(strong, total),
        strongly_harmful_ratio: Some(format!("{strong}/{total}")),
        seed: None,
        samples: None,
    })
}

/// Uniform random choice function: independent uniform pick per menu.
pub fn random_choice<R: Rng>(n: usize, rng: &mut R) -> ChoiceFunction {
    let mut picks = vec![0u8; 1usize << n];
    for mask in 1..=full_mask(n) {
        let k = mask.count_ones();
        let mut rest = mask;
        if k > 1 {
            for _ in 0..rng.random_range(0..k) {
                rest &= rest - 1;
            }
        }
        picks[mask as usize] = rest.trailing_zeros() as u8;
    }
    ChoiceFunction::from_raw(n, picks)
}

/// Monte Carlo estimate of the strongly harmful share (and, for
/// `n <= 12`, of every `sp` class) from `samples` uniform choices.
pub fn sample_census(n: usize, samples: u64, seed: u64) -> Result<CensusReport> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("sampled census needs n >= 2, got {n}")));
    }
    if n > MAX_MENU_N {
        return Err(Error::GroundSetTooLarge { n, max: MAX_MENU_N });
    }
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be at least 1".into()));
    }
    let classify_sp = n <= MAX_SAMPLED_SP_N;
    // counts[0..n]: per sp; counts[n]: strongly harmful
    let blocks = usize::try_from(samples.div_ceil(SAMPLE_BLOCK)).expect("block count fits usize");
    let counts = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let block = block as u64;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(block);
            let len = SAMPLE_BLOCK.min(samples - block * SAMPLE_BLOCK);
            let mut counts = vec![0u64; n + 1];
            for _ in 0..len {
                let profile = ReversalProfile::new(&random_choice(n, &mut rng));
                if profile.is_inconsistent() {
                    counts[n] += 1;
                }
                if classify_sp {
                    counts[sp_axiomatic_from(&profile)?.sp] += 1;
                }
            }
            Ok(counts)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(vec![0u64; n + 1], add_counts);

    let by_sp = if classify_sp {
        counts[..n]
            .iter()
            .enumerate()
            .map(|(sp, &k)| (sp, Estimate::sampled(k, samples)))
            .collect()
    } else {
        BTreeMap::new()
    };
    Ok(CensusReport {
        n,
        mode: CensusMode::Sampled,
        total: choice_count(n).to_string(),
        by_sp,
        strongly_harmful: Estimate::sampled(counts[n], samples),
        strongly_harmful_ratio: None,
        seed: Some(seed),
        samples: Some(samples),
    })
}

/// How a simulated decision maker picks the distortion index per menu.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexPolicy {
    /// The same index on every menu.
    Fixed(usize),
    /// Independent uniform index in `0..=cap` per menu.
    UpTo(usize),
    /// Given index per menu; unlisted menus use index 0.
    Explicit(Vec<(Menu, usize)>),
}

impl IndexPolicy {
    /// Largest index the policy can produce.
    pub fn cap(&self) -> usize {
        match self {
            IndexPolicy::Fixed(i) | IndexPolicy::UpTo(i) => *i,
            IndexPolicy::Explicit(map) => map.iter().map(|&(_, i)| i).max().unwrap_or(0),
        }
    }
}

/// Simulates a decision maker who maximizes a distortion of `order` on each menu.
pub fn generate_harmful(order: &LinearOrder, policy: &IndexPolicy, seed: u64) -> Result<ChoiceFunction> {
    let n = order.n();
    if policy.cap() >= n {
        return Err(Error::IndexOutOfRange {
            index: policy.cap(),
            n,
        });
    }
    let mut explicit = vec![0usize; 1usize << n];
    if let IndexPolicy::Explicit(map) = policy {
        for &(menu, i) in map {
            if menu.mask() & !full_mask(n) != 0 {
                return Err(Error::AlternativeOutOfRange {
                    index: menu.max_member(),
                    n,
                });
            }
            explicit[menu.mask() as usize] = i;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ChoiceFunction::from_fn(n, |menu| {
        let i = match policy {
            IndexPolicy::Fixed(i) => *i,
            IndexPolicy::UpTo(cap) => rng.random_range(0..=*cap),
            IndexPolicy::Explicit(_) => explicit[menu.mask() as usize],
        };
        menu.members()
            .min_by_key(|&a| distorted_position(order, i, a))
            .expect("menus are nonempty")
    })
}

/// Inconsistent choice on `2k` alternatives `x*, x1, .., x(2k-1)`.
///
/// The full set picks `x*`. Dropping `x(m)` from it picks `x(m-1)`, and
/// dropping both `x*` and `x(m)` picks `x(m+1)`, with indices wrapping
/// around `1..=2k-1`. Every other menu picks its first member in label order.
pub fn construct_inconsistent(k: usize) -> Result<(GroundSet, ChoiceFunction)> {
    if k < 2 || 2 * k > MAX_MENU_N {
        return Err(Error::InvalidParameter(format!(
            "k must lie in 2..={}, got {k}",
            MAX_MENU_N / 2
        )));
    }
    let n = 2 * k;
    let m = n - 1; // x1..x(m) sit at indices 1..=m, x* at 0
    let labels = std::iter::once("x*".to_string()).chain((1..=m).map(|i| format!("x{i}")));
    let ground = GroundSet::new(labels)?;
    let full = full_mask(n);
    let wrap = |i: usize| (i + m - 1) % m + 1;

    let c = ChoiceFunction::from_fn(n, |menu| {
        let mask = menu.mask();
        let missing = full & !mask;
        match (menu.len(), missing.count_ones()) {
            (_, 0) => 0,
            (_, 1) if missing != 1 => wrap(missing.trailing_zeros() as usize - 1),
            (_, 2) if missing & 1 != 0 => {
                let dropped = (missing & !1).trailing_zeros() as usize;
                wrap(dropped + 1)
            }
            _ => menu.members().next().expect("menus are nonempty"),
        }
    })?;
    Ok((ground, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::is_inconsistent;
    use crate::degree::sp;
    use crate::fixtures;

    #[test]
    fn choice_counts() {
        assert_eq!(choice_count(2), BigUint::from(2u32));
        assert_eq!(choice_count(3), BigUint::from(24u32));
        assert_eq!(choice_count(4), BigUint::from(20736u32));
        assert_eq!(ChoiceSpace::new(4).unwrap().len(), 4 * 81 * 64);
    }

    #[test]
    fn space_enumerates_distinct_choices() {
        let space = ChoiceSpace::new(3).unwrap();
        let all: std::collections::HashSet<_> = space.iter().collect();
        assert_eq!(all.len(), 24);
    }

    #[test]
    fn census_n2() {
        let r = enumerate_census(2).unwrap();
        assert_eq!(r.total, "2");
        assert_eq!(r.by_sp[&0].count, 2);
        assert_eq!(r.by_sp[&1].count, 0);
        assert_eq!(r.strongly_harmful.fraction, 0.0);
    }

    #[test]
    fn census_n3_rational_count() {
        let r = enumerate_census(3).unwrap();
        assert_eq!(r.total, "24");
        assert_eq!(r.by_sp[&0].count, 6);
    }

    #[test]
    fn census_rejects_large_n() {
        assert!(matches!(enumerate_census(5), Err(Error::GroundSetTooLarge { .. })));
    }

    #[test]
    fn sampling_is_reproducible() {
        let a = sample_census(4, 5000, 7).unwrap();
        let b = sample_census(4, 5000, 7).unwrap();
        assert_eq!(a, b);
        let c = sample_census(4, 5000, 8).unwrap();
        assert_ne!(a.strongly_harmful.count, c.strongly_harmful.count);
    }

    #[test]
    fn sampling_rejects_bad_parameters() {
        assert!(sample_census(1, 10, 0).is_err());
        assert!(sample_census(3, 0, 0).is_err());
    }

    #[test]
    fn fixed_zero_is_rational() {
        let order = LinearOrder::new(vec![2, 0, 1, 3]).unwrap();
        let c = generate_harmful(&order, &IndexPolicy::Fixed(0), 1).unwrap();
        assert_eq!(c, ChoiceFunction::from_order(&order).unwrap());
        assert_eq!(sp(&c).unwrap().sp, 0);
    }

    #[test]
    fn projects_table_is_regenerated() {
        let (g, expected) = fixtures::example3();
        let order = g.parse_order("h,mh,ml,l").unwrap();
        let menu = |s: &str| g.menu(&s.split_whitespace().collect::<Vec<_>>()).unwrap();
        let map = [
            ("h mh ml l", 0),
            ("h ml l", 0),
            ("h mh", 0),
            ("h l", 0),
            ("ml l", 0),
            ("h mh l", 1),
            ("h ml", 1),
            ("mh ml", 1),
            ("h mh ml", 2),
            ("mh ml l", 2),
            ("mh l", 2),
        ]
        .map(|(m, i)| (menu(m), i))
        .to_vec();
        let c = generate_harmful(&order, &IndexPolicy::Explicit(map), 0).unwrap();
        assert_eq!(c, expected);
    }

    #[test]
    fn donation_table_is_regenerated() {
        let (g, expected) = fixtures::example1();
        let order = g.parse_order("0,5,20").unwrap();
        let map = all_menus(3)
            .into_iter()
            .map(|m| (m, if m == Menu::full(3) { 0 } else { 1 }))
            .collect();
        let c = generate_harmful(&order, &IndexPolicy::Explicit(map), 0).unwrap();
        assert_eq!(c, expected);
    }

    #[test]
    fn policy_index_is_validated() {
        let order = LinearOrder::identity(3);
        assert_eq!(
            generate_harmful(&order, &IndexPolicy::UpTo(3), 0),
            Err(Error::IndexOutOfRange { index: 3, n: 3 })
        );
    }

    #[test]
    fn capped_generation_respects_cap() {
        for seed in 0..20 {
            let order = LinearOrder::new(vec![3, 1, 0, 2, 4]).unwrap();
            let cap = (seed % 4) as usize;
            let c = generate_harmful(&order, &IndexPolicy::UpTo(cap), seed).unwrap();
            assert!(sp(&c).unwrap().sp <= cap);
        }
    }

    #[test]
    fn constructed_choices_are_inconsistent() {
        for k in 2..=4 {
            let (g, c) = construct_inconsistent(k).unwrap();
            assert_eq!(g.len(), 2 * k);
            assert!(is_inconsistent(&c), "k = {k}");
        }
        assert!(construct_inconsistent(1).is_err());
    }

    #[test]
    fn constructed_k2_table() {
        let (g, c) = construct_inconsistent(2).unwrap();
        let pick = |s: &str| g.label(c.pick(g.menu(&s.split_whitespace().collect::<Vec<_>>()).unwrap())).to_string();
        assert_eq!(pick("x* x1 x2 x3"), "x*");
        assert_eq!(pick("x* x2 x3"), "x3");
        assert_eq!(pick("x* x1 x3"), "x1");
        assert_eq!(pick("x* x1 x2"), "x2");
        assert_eq!(pick("x2 x3"), "x2");
        assert_eq!(pick("x1 x3"), "x3");
        assert_eq!(pick("x1 x2"), "x1");
    }
}
