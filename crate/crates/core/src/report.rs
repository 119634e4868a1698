//! Label-based report objects and their text rendering.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::axioms::{constant_selection_witnesses, find_reversals, is_inconsistent, CnsWitness};
use crate::census::CensusReport;
use crate::degree::{sp, SpMethod, SpReport};
use crate::elicit::{all_extensions, elicit_partial, elicit_weakly_harmful};
use crate::error::Result;
use crate::model::{ChoiceFunction, GroundSet, LinearOrder, Reversal};

/// Reversals listed in a report; the total is always exact.
pub const MAX_REPORTED_REVERSALS: usize = 1000;
/// Elicited orders listed in a report.
pub const MAX_ELICITED_ORDERS: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReversalView {
    pub menu_a: Vec<String>,
    pub pick_a: String,
    pub menu_b: Vec<String>,
    pub pick_b: String,
}

impl ReversalView {
    pub fn new(ground: &GroundSet, r: &Reversal) -> Self {
        ReversalView {
            menu_a: ground.menu_labels(r.menu_a),
            pick_a: ground.label(r.pick_a).to_string(),
            menu_b: ground.menu_labels(r.menu_b),
            pick_b: ground.label(r.pick_b).to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessView {
    pub items: Vec<String>,
    pub paired_reversals: Vec<ReversalView>,
}

impl WitnessView {
    pub fn new(ground: &GroundSet, w: &CnsWitness) -> Self {
        WitnessView {
            items: w.witness_set.iter().map(|&a| ground.label(a).to_string()).collect(),
            paired_reversals: w.paired_reversals.iter().map(|r| ReversalView::new(ground, r)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpView {
    pub sp: usize,
    pub method: SpMethod,
    pub minimizing_orders: Vec<Vec<String>>,
    pub minimizing_order_count: Option<u64>,
    pub witness: Option<WitnessView>,
}

impl SpView {
    pub fn new(ground: &GroundSet, r: &SpReport) -> Self {
        SpView {
            sp: r.sp,
            method: r.method,
            minimizing_orders: r.minimizing_orders.iter().map(|o| ground.order_labels(o)).collect(),
            minimizing_order_count: r.minimizing_order_count,
            witness: r.cns_witness.as_ref().map(|w| WitnessView::new(ground, w)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub alternatives: Vec<String>,
    pub n: usize,
    pub menus: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub dataset: DatasetSummary,
    pub warp: bool,
    pub reversal_count: usize,
    pub reversals: Vec<ReversalView>,
    pub sp: SpView,
    pub weakly_harmful: bool,
    pub strongly_harmful: bool,
    pub inconsistent: bool,
    pub constant_selection: Option<Vec<String>>,
    pub elicited_orders: Vec<Vec<String>>,
    pub elicited_order_count: Option<u64>,
    pub partial_order: Option<Vec<(String, String)>>,
    pub warnings: Vec<String>,
}

/// Full analysis of one dataset.
pub fn analyze(ground: &GroundSet, c: &ChoiceFunction, warnings: Vec<String>) -> Result<AnalysisReport> {
    let n = c.n();
    let reversals = find_reversals(c);
    let sp_report = sp(c)?;
    let label = |a: usize| ground.label(a).to_string();

    let mut elicited_orders = Vec::new();
    let mut elicited_order_count = None;
    let mut partial_order = None;
    if let Some(w) = &sp_report.cns_witness {
        let p = elicit_partial(c, &w.witness_set)?;
        partial_order = Some(p.pairs().into_iter().map(|(a, b)| (label(a), label(b))).collect());
        let orders: Vec<LinearOrder> = if sp_report.sp == 1 {
            elicit_weakly_harmful(c)?
        } else {
            let ext = all_extensions(&p, MAX_ELICITED_ORDERS);
            elicited_order_count = Some(ext.total);
            ext.orders
        };
        if elicited_order_count.is_none() {
            elicited_order_count = Some(orders.len() as u64);
        }
        elicited_orders = orders.iter().map(|o| ground.order_labels(o)).collect();
    }

    let inconsistent = n >= 2 && is_inconsistent(c);
    Ok(AnalysisReport {
        dataset: DatasetSummary {
            alternatives: ground.labels().to_vec(),
            n,
            menus: (1usize << n) - 1,
        },
        warp: reversals.is_empty(),
        reversal_count: reversals.len(),
        reversals: reversals
            .iter()
            .take(MAX_REPORTED_REVERSALS)
            .map(|r| ReversalView::new(ground, r))
            .collect(),
        weakly_harmful: sp_report.sp == 1,
        strongly_harmful: n >= 2 && sp_report.sp == n - 1,
        inconsistent,
        constant_selection: constant_selection_witnesses(c).map(|v| v.into_iter().map(label).collect()),
        sp: SpView::new(ground, &sp_report),
        elicited_orders,
        elicited_order_count,
        partial_order,
        warnings,
    })
}

fn menu_str(m: &[String]) -> String {
    format!("{{{}}}", m.join(","))
}

fn reversal_line(r: &ReversalView) -> String {
    format!(
        "{} -> {}  vs  {} -> {}",
        menu_str(&r.menu_a),
        r.pick_a,
        menu_str(&r.menu_b),
        r.pick_b
    )
}

pub fn render_sp(out: &mut String, v: &SpView) {
    let method = match v.method {
        SpMethod::Bruteforce => "brute force",
        SpMethod::Axiomatic => "axiomatic",
        SpMethod::Both => "axiomatic + brute force",
    };
    let _ = writeln!(out, "sp             {} ({method})", v.sp);
    if let Some(w) = &v.witness {
        let _ = writeln!(out, "witness        {}", w.items.join(", "));
        for r in &w.paired_reversals {
            let _ = writeln!(out, "  paired       {}", reversal_line(r));
        }
    }
    if let Some(count) = v.minimizing_order_count {
        let _ = writeln!(out, "minimizers     {count}");
        for o in &v.minimizing_orders {
            let _ = writeln!(out, "  {}", o.join(" > "));
        }
        if (v.minimizing_orders.len() as u64) < count {
            let _ = writeln!(out, "  ... {} more", count - v.minimizing_orders.len() as u64);
        }
    }
}

pub fn render_reversals(out: &mut String, total: usize, reversals: &[ReversalView]) {
    let _ = writeln!(out, "reversals      {total}");
    for r in reversals {
        let _ = writeln!(out, "  {}", reversal_line(r));
    }
    if reversals.len() < total {
        let _ = writeln!(out, "  ... {} more", total - reversals.len());
    }
}

impl AnalysisReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let d = &self.dataset;
        let _ = writeln!(out, "alternatives   {} (n = {}, {} menus)", d.alternatives.join(", "), d.n, d.menus);
        for w in &self.warnings {
            let _ = writeln!(out, "warning        {w}");
        }
        let _ = writeln!(out, "WARP           {}", if self.warp { "holds" } else { "violated" });
        render_reversals(&mut out, self.reversal_count, &self.reversals);
        render_sp(&mut out, &self.sp);
        let class = match (self.sp.sp, self.weakly_harmful, self.strongly_harmful) {
            (0, _, _) => "rational",
            (_, _, true) => "strongly harmful",
            (_, true, _) => "weakly harmful",
            _ => "harmful",
        };
        let _ = writeln!(out, "class          {class}");
        let _ = writeln!(out, "inconsistent   {}", if self.inconsistent { "yes" } else { "no" });
        if let Some(cs) = &self.constant_selection {
            let _ = writeln!(out, "constant sel.  {}", cs.join(", "));
        }
        if let Some(p) = &self.partial_order {
            let pairs: Vec<String> = p.iter().map(|(a, b)| format!("{a}>{b}")).collect();
            let _ = writeln!(out, "revealed       {}", if pairs.is_empty() { "(none)".into() } else { pairs.join(" ") });
        }
        if !self.elicited_orders.is_empty() {
            let _ = writeln!(out, "elicited       {}", self.elicited_order_count.unwrap_or(0));
            for o in &self.elicited_orders {
                let _ = writeln!(out, "  {}", o.join(" > "));
            }
        }
        out
    }
}

impl CensusReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n              {}", self.n);
        let _ = writeln!(out, "choices        {}", self.total);
        if let (Some(samples), Some(seed)) = (self.samples, self.seed) {
            let _ = writeln!(out, "samples        {samples} (seed {seed})");
        }
        let _ = writeln!(out, "sp   count        fraction");
        for (sp, e) in &self.by_sp {
            let _ = write!(out, "{sp:<4} {:<12} {:.6}", e.count, e.fraction);
            if e.half_width > 0.0 {
                let _ = write!(out, " ± {:.6}", e.half_width);
            }
            out.push('\n');
        }
        let s = &self.strongly_harmful;
        let _ = write!(out, "strongly harmful  {:.6}", s.fraction);
        if let Some(ratio) = &self.strongly_harmful_ratio {
            let _ = write!(out, " ({ratio})");
        } else {
            let _ = write!(out, " ± {:.6}", s.half_width);
        }
        out.push('\n');
        out
    }
}
