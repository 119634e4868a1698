//! Degree of self-punishment, computed two independent ways.
//!
//! [`sp_bruteforce`] minimizes [`min_max_index`] over every linear order.
//! [`sp_axiomatic`] reads the value off the reversal structure: 0 under WARP,
//! `n - 1` for inconsistent choices, otherwise the unique `j` admitting
//! constant nonreciprocal selection of `j` items. [`sp`] runs both when the
//! ground set is small enough and refuses to answer if they disagree.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::axioms::{check_cns_from, CnsWitness, ReversalProfile};
use crate::error::{Error, Result};
use crate::model::{ChoiceFunction, LinearOrder, MAX_ORDER_N};
use crate::rationalize::min_max_index_within;

/// Cap on the minimizing orders kept in a report; the total is still counted.
pub const MAX_REPORTED_ORDERS: usize = 100;

// permutations per parallel work unit; fixed so results ignore worker count
const PERM_CHUNK: u64 = 720;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpMethod {
    Bruteforce,
    Axiomatic,
    Both,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpReport {
    pub sp: usize,
    pub method: SpMethod,
    /// Lexicographically first minimizing orders (brute force only).
    pub minimizing_orders: Vec<LinearOrder>,
    /// Exact number of minimizing orders (brute force only).
    pub minimizing_order_count: Option<u64>,
    pub cns_witness: Option<CnsWitness>,
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// The `rank`-th permutation of `0..n` in lexicographic order.
fn unrank_permutation(n: usize, mut rank: u64) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(n);
    for k in (0..n).rev() {
        let f = factorial(k);
        let idx = (rank / f) as usize;
        rank %= f;
        out.push(pool.remove(idx));
    }
    out
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot has a successor");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[derive(Debug, Clone)]
struct OrderScan {
    best: usize,
    count: u64,
    orders: Vec<LinearOrder>,
}

impl OrderScan {
    fn merge(mut self, other: OrderScan) -> OrderScan {
        use std::cmp::Ordering::*;
        match self.best.cmp(&other.best) {
            Less => self,
            Greater => other,
            Equal => {
                self.count += other.count;
                let room = MAX_REPORTED_ORDERS - self.orders.len();
                self.orders.extend(other.orders.into_iter().take(room));
                self
            }
        }
    }
}

fn scan_range(c: &ChoiceFunction, lo: u64, hi: u64) -> OrderScan {
    let n = c.n();
    let mut ranking = unrank_permutation(n, lo);
    let mut scan = OrderScan {
        best: usize::MAX,
        count: 0,
        orders: Vec::new(),
    };
    for _ in lo..hi {
        let order = LinearOrder::new(ranking.clone()).expect("permutation");
        if let Some(v) = min_max_index_within(c, &order, scan.best) {
            if v < scan.best {
                scan.best = v;
                scan.count = 0;
                scan.orders.clear();
            }
            scan.count += 1;
            if scan.orders.len() < MAX_REPORTED_ORDERS {
                scan.orders.push(order);
            }
        }
        next_permutation(&mut ranking);
    }
    scan
}

pub fn sp_bruteforce(c: &ChoiceFunction) -> Result<SpReport> {
    let n = c.n();
    if n > MAX_ORDER_N {
        return Err(Error::GroundSetTooLarge { n, max: MAX_ORDER_N });
    }
    let total = factorial(n);
    let chunks = total.div_ceil(PERM_CHUNK);
    let scans: Vec<OrderScan> = (0..chunks as usize)
        .into_par_iter()
        .map(|k| k as u64)
        .map(|k| scan_range(c, k * PERM_CHUNK, ((k + 1) * PERM_CHUNK).min(total)))
        .collect();
    let scan = scans
        .into_iter()
        .reduce(OrderScan::merge)
        .expect("at least one permutation");
    Ok(SpReport {
        sp: scan.best,
        method: SpMethod::Bruteforce,
        minimizing_orders: scan.orders,
        minimizing_order_count: Some(scan.count),
        cns_witness: None,
    })
}

pub fn sp_axiomatic(c: &ChoiceFunction) -> Result<SpReport> {
    sp_axiomatic_from(&ReversalProfile::new(c))
}

pub(crate) fn sp_axiomatic_from(profile: &ReversalProfile) -> Result<SpReport> {
    let n = profile.n();
    let report = |sp, cns_witness| SpReport {
        sp,
        method: SpMethod::Axiomatic,
        minimizing_orders: Vec::new(),
        minimizing_order_count: None,
        cns_witness,
    };
    if !profile.has_reversal() {
        return Ok(report(0, None));
    }
    let max = n - 1;
    if profile.is_inconsistent() {
        let witness = check_cns_from(profile, max)?.ok_or(Error::NoCharacterizingJ { max })?;
        return Ok(report(max, Some(witness)));
    }
    for j in 1..max {
        if let Some(w) = check_cns_from(profile, j)? {
            return Ok(report(j, Some(w)));
        }
    }
    Err(Error::NoCharacterizingJ { max })
}

/// Axiomatic `sp`, cross-checked by brute force when `n <= 8`.
pub fn sp(c: &ChoiceFunction) -> Result<SpReport> {
    let mut report = sp_axiomatic(c)?;
    if c.n() <= MAX_ORDER_N {
        let brute = sp_bruteforce(c)?;
        if brute.sp != report.sp {
            return Err(Error::CrossCheckMismatch {
                bruteforce: brute.sp,
                axiomatic: report.sp,
            });
        }
        report.method = SpMethod::Both;
        report.minimizing_orders = brute.minimizing_orders;
        report.minimizing_order_count = brute.minimizing_order_count;
    }
    Ok(report)
}
