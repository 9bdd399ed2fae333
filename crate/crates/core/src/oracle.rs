//! Brute-force ground truth for the incremental engine.
//!
//! Every disjunctive network splits into finitely many non-disjunctive ones,
//! one per selection of a disjunct for each input. Those are plain distance
//! networks and can be solved exactly by shortest paths. Enumerating them
//! gives the minimal intervals and the inconsistent label sets the engine is
//! supposed to maintain incrementally, without sharing any code with it.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::ilset::ILSetStore;
use crate::label::{LabelSet, R0, W0};
use crate::tcn::{Tcn, COMPOSE_CAP};
use crate::time::{union_normalize, Bound, Interval, TimeValue};

/// Default limit on the number of enumerated selections.
pub const DEFAULT_SCENARIO_CAP: u64 = 1_000_000;

/// Path bound `t_j - t_i <= value`, strict when the bound comes from an open
/// endpoint. Strict is the smaller (tighter) of two equal values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Weight {
    pub value: TimeValue,
    pub strict: bool,
}

impl Weight {
    pub fn unbounded() -> Weight {
        Weight { value: TimeValue::PosInf, strict: true }
    }

    pub fn zero() -> Weight {
        Weight { value: TimeValue::Finite(0), strict: false }
    }

    fn add(self, other: Weight) -> Weight {
        let value = self
            .value
            .add(other.value, COMPOSE_CAP)
            .expect("path weights stay far below the compose cap");
        Weight { value, strict: self.strict || other.strict }
    }
}

impl Ord for Weight {
    fn cmp(&self, other: &Weight) -> Ordering {
        self.value.cmp(&other.value).then(match (self.strict, other.strict) {
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => Ordering::Equal,
        })
    }
}

impl PartialOrd for Weight {
    fn partial_cmp(&self, other: &Weight) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.strict { "<" } else { "<=" }, self.value)
    }
}

/// A non-disjunctive distance network over the same nodes as the source
/// network.
#[derive(Debug, Clone)]
pub struct Stn {
    n: usize,
    w: Vec<Vec<Weight>>,
}

impl Stn {
    pub fn new(n: usize) -> Stn {
        let mut w = vec![vec![Weight::unbounded(); n]; n];
        for (i, row) in w.iter_mut().enumerate() {
            row[i] = Weight::zero();
        }
        Stn { n, w }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Tightens the bound on t_j - t_i.
    pub fn constrain(&mut self, i: usize, j: usize, w: Weight) {
        if w < self.w[i][j] {
            self.w[i][j] = w;
        }
    }

    /// Imposes t_j - t_i in `iv` as a pair of difference bounds.
    pub fn constrain_interval(&mut self, i: usize, j: usize, iv: &Interval) {
        let hi = iv.hi();
        if hi.value != TimeValue::PosInf {
            self.constrain(i, j, Weight { value: hi.value, strict: hi.open });
        }
        let lo = iv.lo();
        if lo.value != TimeValue::NegInf {
            self.constrain(j, i, Weight { value: lo.value.neg(), strict: lo.open });
        }
    }
}

/// All-pairs tightest difference bounds, or None when the network admits no
/// solution (a negative cycle, or a zero cycle with a strict edge).
pub fn stn_solve(stn: &Stn) -> Option<Vec<Vec<Weight>>> {
    let n = stn.n;
    let mut d = stn.w.clone();
    for k in 0..n {
        for i in 0..n {
            if d[i][k].value == TimeValue::PosInf {
                continue;
            }
            for j in 0..n {
                if d[k][j].value == TimeValue::PosInf {
                    continue;
                }
                let via = d[i][k].add(d[k][j]);
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    if (0..n).any(|i| d[i][i] < Weight::zero()) {
        return None;
    }
    Some(d)
}

/// One resolution of every disjunctive input: the chosen disjunct per
/// registry entry (singletons pick 0) and the fulfilled label set, R0
/// included.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub picks: Vec<usize>,
    pub labels: LabelSet,
}

/// All selections of one active disjunct per multi-disjunct input, in
/// registry order, first disjunct varying slowest. Nothing is filtered by
/// consistency. Inputs asserted under a context other than the root take no
/// part.
pub fn enumerate_scenarios(tcn: &Tcn, cap: u64) -> Result<Vec<Scenario>> {
    let inputs = tcn.inputs();
    // positions that actually offer a choice, with their selectable disjuncts
    let mut open_slots: Vec<(usize, Vec<usize>)> = Vec::new();
    for (idx, rec) in inputs.iter().enumerate() {
        if rec.context != W0 || rec.is_singleton() {
            continue;
        }
        let active: Vec<usize> =
            (0..rec.intervals.len()).filter(|&p| rec.active[p]).collect();
        if active.is_empty() {
            return Ok(Vec::new());
        }
        open_slots.push((idx, active));
    }
    let mut count: u64 = 1;
    for (_, active) in &open_slots {
        count = count
            .checked_mul(active.len() as u64)
            .ok_or(Error::ScenarioCap(u64::MAX, cap))?;
        if count > cap {
            return Err(Error::ScenarioCap(count, cap));
        }
    }

    let mut out = Vec::with_capacity(count as usize);
    let mut odometer = vec![0usize; open_slots.len()];
    loop {
        let mut picks = vec![0usize; inputs.len()];
        let mut labels = LabelSet::singleton(R0);
        for (slot, &digit) in open_slots.iter().zip(&odometer) {
            let pick = slot.1[digit];
            picks[slot.0] = pick;
            labels.insert(inputs[slot.0].labels[pick]);
        }
        out.push(Scenario { picks, labels });
        // advance, last slot fastest
        let mut pos = open_slots.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            odometer[pos] += 1;
            if odometer[pos] < open_slots[pos].1.len() {
                break;
            }
            odometer[pos] = 0;
        }
    }
}

/// The distance network a scenario induces: every root-context input
/// contributes exactly its chosen disjunct.
pub fn scenario_stn(tcn: &Tcn, sc: &Scenario) -> Stn {
    let mut stn = Stn::new(tcn.node_count());
    for (idx, rec) in tcn.inputs().iter().enumerate() {
        if rec.context != W0 {
            continue;
        }
        stn.constrain_interval(rec.from.0, rec.to.0, &rec.intervals[sc.picks[idx]]);
    }
    stn
}

/// Minimal intervals per ordered pair: the union over all consistent
/// scenarios of the tightest interval each one allows.
pub fn oracle_minimal_network(tcn: &Tcn, cap: u64) -> Result<Vec<Vec<Vec<Interval>>>> {
    let n = tcn.node_count();
    let mut acc: Vec<Vec<Vec<Interval>>> = vec![vec![Vec::new(); n]; n];
    for sc in enumerate_scenarios(tcn, cap)? {
        let Some(d) = stn_solve(&scenario_stn(tcn, &sc)) else {
            continue;
        };
        for (i, acc_row) in acc.iter_mut().enumerate() {
            for (j, cell) in acc_row.iter_mut().enumerate() {
                let lo = Bound::new(d[j][i].value.neg(), d[j][i].strict);
                let hi = Bound::new(d[i][j].value, d[i][j].strict);
                let iv = Interval::new(lo, hi)
                    .expect("a consistent scenario has a non-empty projection");
                cell.push(iv);
            }
        }
    }
    Ok(acc
        .into_iter()
        .map(|row| row.into_iter().map(union_normalize).collect())
        .collect())
}

/// All subset-minimal label sets (at most one label per input, optionally
/// plus R0, at most `max_size` labels) whose own elemental constraints admit
/// no solution. R0 stands for the conjunction of every singleton input.
/// Sibling pairs are appended by construction.
pub fn oracle_ilsets(tcn: &Tcn, max_size: usize, cap: u64) -> Result<Vec<LabelSet>> {
    let inputs = tcn.inputs();
    let mut slots: Vec<(usize, Vec<usize>)> = Vec::new();
    for (idx, rec) in inputs.iter().enumerate() {
        if rec.context != W0 || rec.is_singleton() {
            continue;
        }
        let active: Vec<usize> =
            (0..rec.intervals.len()).filter(|&p| rec.active[p]).collect();
        if !active.is_empty() {
            slots.push((idx, active));
        }
    }
    let mut count: u64 = 2;
    for (_, active) in &slots {
        count = count
            .checked_mul(active.len() as u64 + 1)
            .ok_or(Error::ScenarioCap(u64::MAX, cap))?;
        if count > cap {
            return Err(Error::ScenarioCap(count, cap));
        }
    }

    let mut found = ILSetStore::new();
    // digit 0 = input left out, digit d = its (d-1)-th active disjunct
    let mut odometer = vec![0usize; slots.len()];
    for with_r0 in [false, true] {
        odometer.iter_mut().for_each(|d| *d = 0);
        loop {
            let mut set = LabelSet::new();
            let mut size = 0usize;
            if with_r0 {
                set.insert(R0);
                size += 1;
            }
            for (slot, &digit) in slots.iter().zip(&odometer) {
                if digit > 0 {
                    set.insert(inputs[slot.0].labels[slot.1[digit - 1]]);
                    size += 1;
                }
            }
            if size >= 2 && size <= max_size && !found.covers(&set) {
                let mut stn = Stn::new(tcn.node_count());
                for rec in inputs {
                    if rec.context != W0 {
                        continue;
                    }
                    if rec.is_singleton() {
                        if with_r0 {
                            stn.constrain_interval(rec.from.0, rec.to.0, &rec.intervals[0]);
                        }
                        continue;
                    }
                    for (p, &l) in rec.labels.iter().enumerate() {
                        if set.contains(l) {
                            stn.constrain_interval(rec.from.0, rec.to.0, &rec.intervals[p]);
                        }
                    }
                }
                if stn_solve(&stn).is_none() {
                    found.add(set);
                }
            }
            let mut pos = slots.len();
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                odometer[pos] += 1;
                if odometer[pos] <= slots[pos].1.len() {
                    break;
                }
                odometer[pos] = 0;
            }
            if odometer.iter().all(|&d| d == 0) {
                break;
            }
        }
    }
    for (idx, _) in &slots {
        let labels = &inputs[*idx].labels;
        for a in 0..labels.len() {
            for b in a + 1..labels.len() {
                found.add(LabelSet::from_iter([labels[a], labels[b]]));
            }
        }
    }
    let mut out: Vec<LabelSet> = found.iter().cloned().collect();
    out.sort_by_key(|s| (s.len(), s.iter().collect::<Vec<_>>()));
    Ok(out)
}

/// Outcome of checking the engine against the enumeration oracle on one
/// network: minimal-interval agreement per pair, no stored label set that a
/// consistent scenario fulfills, and a stored subset for every inconsistent
/// selection the oracle finds.
#[derive(Debug, Clone, Default)]
pub struct CompareReport {
    pub pairs_checked: usize,
    pub projection_mismatches: Vec<String>,
    pub unsound_sets: Vec<String>,
    pub missing_sets: Vec<String>,
}

impl CompareReport {
    pub fn pass(&self) -> bool {
        self.projection_mismatches.is_empty()
            && self.unsound_sets.is_empty()
            && self.missing_sets.is_empty()
    }
}

impl fmt::Display for CompareReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pass() {
            return write!(f, "pass: {} pairs, store sound and complete", self.pairs_checked);
        }
        writeln!(f, "FAIL")?;
        for m in &self.projection_mismatches {
            writeln!(f, "  projection: {m}")?;
        }
        for m in &self.unsound_sets {
            writeln!(f, "  unsound stored set: {m}")?;
        }
        for m in &self.missing_sets {
            writeln!(f, "  missing stored subset for: {m}")?;
        }
        Ok(())
    }
}

fn render_intervals(ivs: &[Interval]) -> String {
    if ivs.is_empty() {
        return "{}".to_owned();
    }
    let parts: Vec<String> = ivs.iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", parts.join(" "))
}

/// Runs the full oracle against the engine state the network reached.
pub fn compare(tcn: &Tcn, cap: u64) -> Result<CompareReport> {
    let mut report = CompareReport::default();
    let n = tcn.node_count();
    let oracle_net = oracle_minimal_network(tcn, cap)?;
    for i in 0..n {
        for j in i + 1..n {
            report.pairs_checked += 1;
            let engine = tcn.projection(crate::tcn::NodeId(i), crate::tcn::NodeId(j))?;
            if engine != oracle_net[i][j] {
                report.projection_mismatches.push(format!(
                    "{} -> {}: engine {} oracle {}",
                    tcn.node_name(crate::tcn::NodeId(i)),
                    tcn.node_name(crate::tcn::NodeId(j)),
                    render_intervals(&engine),
                    render_intervals(&oracle_net[i][j]),
                ));
            }
        }
    }

    let mut consistent: Vec<LabelSet> = Vec::new();
    for sc in enumerate_scenarios(tcn, cap)? {
        if stn_solve(&scenario_stn(tcn, &sc)).is_some() {
            consistent.push(sc.labels);
        }
    }
    for stored in tcn.store().iter() {
        if consistent.iter().any(|c| stored.is_subset(c)) {
            report.unsound_sets.push(tcn.labels().render_set(stored));
        }
    }

    let max_size = tcn.inputs().len().max(2);
    for needed in oracle_ilsets(tcn, max_size, cap)? {
        if !tcn.store().covers(&needed) {
            report.missing_sets.push(tcn.labels().render_set(&needed));
        }
    }
    Ok(report)
}
