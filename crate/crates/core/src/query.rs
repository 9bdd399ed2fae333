//! Queries over a closed network: simultaneous-holding checks, hypothetical
//! implication, scenario extraction and concrete integer solutions.
//!
//! All of them lean on the same two facts the engine maintains: every
//! constraint entry is minimal, and the store of inconsistent label sets is
//! complete. A query never triggers propagation.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::label::{LabelSet, R0, W0};
use crate::oracle::{scenario_stn, stn_solve, Scenario, Stn, Weight};
use crate::tcn::{NodeId, Tcn, ORIGIN};
use crate::time::{Interval, TimeValue};

/// A full assignment of integer times, T0 pinned to zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Instantiation {
    pub values: BTreeMap<NodeId, i64>,
}

/// True iff the queried intervals can hold together: some selection of one
/// elemental constraint per query overlaps every query interval and unites
/// to a label set that is still consistent. Callers pose at most one query
/// per node pair.
pub fn check_simultaneous(tcn: &Tcn, queries: &[(NodeId, NodeId, Interval)]) -> Result<bool> {
    let mut candidates: Vec<Vec<&LabelSet>> = Vec::with_capacity(queries.len());
    let ctx = tcn.eval();
    for (i, j, iv) in queries {
        let lc = tcn.constraint(*i, *j)?;
        let matching: Vec<&LabelSet> = lc
            .iter()
            .filter(|l| l.interval.intersect(iv).is_some() && !ctx.dead(&l.labels))
            .map(|l| &l.labels)
            .collect();
        if matching.is_empty() {
            return Ok(false);
        }
        candidates.push(matching);
    }
    // depth-first over the selections, pruning on partial unions
    fn descend(
        ctx: &crate::lc::EvalCtx<'_>,
        candidates: &[Vec<&LabelSet>],
        depth: usize,
        union: &LabelSet,
    ) -> bool {
        if depth == candidates.len() {
            return true;
        }
        for labels in &candidates[depth] {
            let next = union.union(labels);
            if !ctx.dead(&next) && descend(ctx, candidates, depth + 1, &next) {
                return true;
            }
        }
        false
    }
    Ok(descend(&ctx, &candidates, 0, &LabelSet::singleton(R0)))
}

/// Does the consequent interval hold whenever the antecedent one does?
/// True iff every live elemental constraint of the antecedent pair lying
/// inside the antecedent interval has a counterpart inside the consequent
/// interval whose labels it carries. An antecedent matching nothing is
/// reported as an error rather than an answer.
pub fn query_implies(
    tcn: &Tcn,
    antecedent: (NodeId, NodeId, Interval),
    consequent: (NodeId, NodeId, Interval),
) -> Result<bool> {
    let (k, l, iv_a) = antecedent;
    let (i, j, iv_c) = consequent;
    let ctx = tcn.eval();
    let from = tcn.constraint(k, l)?;
    let to = tcn.constraint(i, j)?;
    let mut matched = false;
    for x in from.iter() {
        if !iv_a.contains_interval(&x.interval) || ctx.dead(&x.labels) {
            continue;
        }
        matched = true;
        let holds = to.iter().any(|y| {
            iv_c.contains_interval(&y.interval)
                && y.labels.is_subset(&x.labels)
                && !ctx.dead(&y.labels)
        });
        if !holds {
            return Ok(false);
        }
    }
    if !matched {
        return Err(Error::VacuousAntecedent);
    }
    Ok(true)
}

/// Picks one disjunct per input constraint without backtracking: the first
/// active label keeping the accumulated label union consistent. With a
/// complete store this always succeeds.
pub fn extract_scenario(tcn: &Tcn) -> Result<Scenario> {
    let ctx = tcn.eval();
    let mut picks = vec![0usize; tcn.inputs().len()];
    let mut labels = LabelSet::singleton(R0);
    for (idx, rec) in tcn.inputs().iter().enumerate() {
        if rec.context != W0 || rec.is_singleton() {
            continue;
        }
        let mut chosen = None;
        for (p, &label) in rec.labels.iter().enumerate() {
            if !rec.active[p] {
                continue;
            }
            let mut attempt = labels.clone();
            attempt.insert(label);
            if !ctx.dead(&attempt) {
                chosen = Some((p, attempt));
                break;
            }
        }
        match chosen {
            Some((p, union)) => {
                picks[idx] = p;
                labels = union;
            }
            None => {
                return Err(Error::IncompleteStore(format!(
                    "no consistent choice for input {} -> {}",
                    tcn.node_name(rec.from),
                    tcn.node_name(rec.to)
                )))
            }
        }
    }
    Ok(Scenario { picks, labels })
}

/// Earliest integer solution of the non-disjunctive network a scenario
/// selects. Strict bounds are sharpened to the next integer first; a network
/// that is only consistent between integers is reported as a granularity
/// gap.
pub fn solve_scenario(tcn: &Tcn, scenario: &Scenario) -> Result<Instantiation> {
    if scenario.picks.len() != tcn.inputs().len() {
        return Err(Error::Internal("scenario does not match the input registry"));
    }
    let stn = scenario_stn(tcn, scenario);
    if stn_solve(&stn).is_none() {
        return Err(Error::IncompleteStore(
            "a scenario passed the label check but admits no solution".to_owned(),
        ));
    }
    let d = match stn_solve(&integerized(&stn)) {
        Some(d) => d,
        None => return Err(Error::GranularityGap),
    };

    let n = tcn.node_count();
    let mut values: BTreeMap<NodeId, i64> = BTreeMap::new();
    let mut assigned: Vec<(usize, i64)> = Vec::with_capacity(n);
    for j in 0..n {
        let mut lower: Option<i64> = if j == ORIGIN.0 { Some(0) } else { None };
        let mut upper: Option<i64> = if j == ORIGIN.0 { Some(0) } else { None };
        for &(i, v) in &assigned {
            if let TimeValue::Finite(w) = d[j][i].value {
                lower = Some(lower.map_or(v - w, |l| l.max(v - w)));
            }
            if let TimeValue::Finite(w) = d[i][j].value {
                upper = Some(upper.map_or(v + w, |u| u.min(v + w)));
            }
        }
        let v = match (lower, upper) {
            (Some(l), _) => l,
            (None, Some(u)) => u.min(0),
            (None, None) => 0,
        };
        values.insert(NodeId(j), v);
        assigned.push((j, v));
    }

    // the contract is unconditional: every chosen disjunct must be satisfied
    for (idx, rec) in tcn.inputs().iter().enumerate() {
        if rec.context != W0 {
            continue;
        }
        let gap = values[&rec.to] - values[&rec.from];
        if !rec.intervals[scenario.picks[idx]].contains_value(gap) {
            return Err(Error::Internal("derived solution violates an input"));
        }
    }
    Ok(Instantiation { values })
}

/// Sharpen strict finite bounds to the next representable integer. Exact at
/// integer granularity: t < c holds iff t <= c-1.
fn integerized(stn: &Stn) -> Stn {
    let n = stn.node_count();
    let mut out = Stn::new(n);
    for i in 0..n {
        for j in 0..n {
            let w = stn.weight(i, j);
            let w = match (w.value, w.strict) {
                (TimeValue::Finite(v), true) => {
                    Weight { value: TimeValue::Finite(v - 1), strict: false }
                }
                _ => w,
            };
            out.constrain(i, j, w);
        }
    }
    out
}

/// Can the given partial assignment be extended to a full solution? T0 is
/// implicitly zero; listing it with any other value is immediately false.
pub fn check_instantiation(tcn: &Tcn, partial: &Instantiation) -> Result<bool> {
    let mut points: Vec<(NodeId, i64)> = vec![(ORIGIN, 0)];
    for (&node, &value) in &partial.values {
        if node == ORIGIN {
            if value != 0 {
                return Ok(false);
            }
            continue;
        }
        points.push((node, value));
    }
    let mut queries = Vec::new();
    for a in 0..points.len() {
        for b in a + 1..points.len() {
            let (i, vi) = points[a];
            let (j, vj) = points[b];
            queries.push((i, j, Interval::point(vj - vi)));
        }
    }
    check_simultaneous(tcn, &queries)
}
