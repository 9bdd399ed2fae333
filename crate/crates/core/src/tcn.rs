//! The constraint network and its incremental reasoning steps.
//!
//! A network holds one labeled constraint per ordered node pair, the store
//! of inconsistent label sets, and the registry of asserted inputs. Each
//! assertion runs the same pipeline: label the input, test it against the
//! current constraint, record the label combinations the test disproves,
//! intersect, and propagate through the three closure loops. The matrix is
//! kept closed and minimal at all times, so queries never search.

use crate::context::ContextTree;
use crate::error::{Error, Result};
use crate::ilset::ILSetStore;
use crate::label::{LabelId, LabelSet, Labels, LabelsMark, R0, W0};
use crate::lc::{lc_compose, lc_intersect, lc_inverse, EvalCtx, Lec, LC};
use crate::time::{Interval, DEFAULT_VALUE_CAP};

/// Composition bound, far above the input cap so that only genuinely
/// divergent derivations can hit it.
pub(crate) const COMPOSE_CAP: i64 = 1 << 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

/// The reference point: every network starts with it, everything else is
/// placed relative to it.
pub const ORIGIN: NodeId = NodeId(0);

/// How invalid successor contexts discovered by a partition-level update
/// are treated. `Partial` lets a parent-context assertion stand when it
/// rules out some child contexts; `Complete` additionally rejects it when
/// it rules out every child that constrains the pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PartitionPolicy {
    #[default]
    Partial,
    Complete,
}

#[derive(Debug, Clone)]
pub struct TcnConfig {
    /// Largest admissible magnitude of a finite input endpoint.
    pub value_cap: i64,
    /// Assert (T0 {[0,∞)} t) automatically for every added point.
    pub default_origin_constraint: bool,
    pub partition_policy: PartitionPolicy,
    #[doc(hidden)]
    pub skip_closure_loop3: bool,
    #[doc(hidden)]
    pub skip_case_two_records: bool,
}

impl Default for TcnConfig {
    fn default() -> TcnConfig {
        TcnConfig {
            value_cap: DEFAULT_VALUE_CAP,
            default_origin_constraint: true,
            partition_policy: PartitionPolicy::default(),
            skip_closure_loop3: false,
            skip_case_two_records: false,
        }
    }
}

/// One asserted input constraint: its endpoints, the ordered disjunct
/// labels (R0 alone for singletons), the original intervals, the context it
/// was asserted in, and which disjuncts are still selectable. A disjunct
/// that contradicts the network at assertion time is deactivated instead of
/// being tracked through inconsistent sets.
#[derive(Debug, Clone)]
pub struct InputRecord {
    pub from: NodeId,
    pub to: NodeId,
    pub labels: Vec<LabelId>,
    pub intervals: Vec<Interval>,
    pub context: LabelId,
    pub active: Vec<bool>,
}

impl InputRecord {
    pub fn is_singleton(&self) -> bool {
        self.labels.len() == 1 && self.labels[0] == R0
    }
}

#[derive(Debug, Clone)]
pub struct Tcn {
    config: TcnConfig,
    names: Vec<String>,
    lc: Vec<Vec<LC>>,
    pub(crate) labels: Labels,
    pub(crate) store: ILSetStore,
    /// Mutual exclusions between unrelated context branches. Consulted when
    /// filtering label sets but not part of the reported store.
    pub(crate) separation: ILSetStore,
    pub(crate) inputs: Vec<InputRecord>,
    pub(crate) contexts: ContextTree,
}

impl Tcn {
    pub fn new(config: TcnConfig) -> Tcn {
        Tcn {
            config,
            names: vec!["T0".to_owned()],
            lc: vec![vec![LC::point_zero()]],
            labels: Labels::new(),
            store: ILSetStore::new(),
            separation: ILSetStore::new(),
            inputs: Vec::new(),
            contexts: ContextTree::new(),
        }
    }

    pub fn config(&self) -> &TcnConfig {
        &self.config
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn store(&self) -> &ILSetStore {
        &self.store
    }

    pub fn inputs(&self) -> &[InputRecord] {
        &self.inputs
    }

    pub fn contexts(&self) -> &ContextTree {
        &self.contexts
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn node_name(&self, n: NodeId) -> &str {
        &self.names[n.0]
    }

    pub fn node(&self, name: &str) -> Option<NodeId> {
        self.names.iter().position(|n| n == name).map(NodeId)
    }

    fn check_node(&self, n: NodeId) -> Result<()> {
        if n.0 < self.names.len() {
            Ok(())
        } else {
            Err(Error::UnknownNode(format!("#{}", n.0)))
        }
    }

    pub(crate) fn eval(&self) -> EvalCtx<'_> {
        EvalCtx::new(&self.store, &self.labels, COMPOSE_CAP).with_extra(&self.separation)
    }

    /// Adds a time point. With the default origin constraint on, the point
    /// immediately gets (T0 {[0,∞)} t) through the ordinary update path.
    pub fn add_point(&mut self, name: &str) -> Result<NodeId> {
        if self.names.iter().any(|n| n == name) {
            return Err(Error::DuplicateName(name.to_owned()));
        }
        let id = NodeId(self.names.len());
        self.names.push(name.to_owned());
        for (r, row) in self.lc.iter_mut().enumerate() {
            row.push(if r == id.0 { LC::point_zero() } else { LC::universal() });
        }
        let mut row = vec![LC::universal(); self.names.len()];
        row[id.0] = LC::point_zero();
        self.lc.push(row);
        if self.config.default_origin_constraint {
            let nonneg = Interval::new(crate::time::Bound::closed(0), crate::time::Bound::pos_inf())
                .expect("0..inf is well formed");
            let accepted = self.update(ORIGIN, id, &[nonneg])?;
            debug_assert!(accepted, "a default constraint cannot be rejected");
        }
        Ok(id)
    }

    /// Current constraint between two points; lc(j,i) is always the
    /// inverse of lc(i,j).
    pub fn constraint(&self, i: NodeId, j: NodeId) -> Result<&LC> {
        self.check_node(i)?;
        self.check_node(j)?;
        Ok(&self.lc[i.0][j.0])
    }

    pub(crate) fn entry(&self, i: NodeId, j: NodeId) -> &LC {
        &self.lc[i.0][j.0]
    }

    pub(crate) fn set_pair(&mut self, i: NodeId, j: NodeId, v: LC) {
        self.lc[j.0][i.0] = lc_inverse(&v);
        self.lc[i.0][j.0] = v;
    }

    fn validate_input(&self, i: NodeId, j: NodeId, intervals: &[Interval]) -> Result<()> {
        self.check_node(i)?;
        self.check_node(j)?;
        if i == j {
            return Err(Error::SamePoint);
        }
        if intervals.is_empty() {
            return Err(Error::EmptyConstraint);
        }
        for iv in intervals {
            for b in [iv.lo(), iv.hi()] {
                if let Some(v) = b.value.finite() {
                    if v.abs() > self.config.value_cap {
                        return Err(Error::NumericRange(v));
                    }
                }
            }
        }
        if !crate::time::pairwise_disjoint(intervals) {
            return Err(Error::NonDisjointDisjuncts);
        }
        Ok(())
    }

    /// Labels an input constraint: fresh exclusive labels per disjunct (all
    /// sibling pairs recorded as inconsistent sets), or R0 for a singleton.
    /// Disjunct names are only meaningful with two or more disjuncts.
    /// Returns the labeled constraint and the registry index.
    pub(crate) fn put_labels(
        &mut self,
        i: NodeId,
        j: NodeId,
        intervals: &[Interval],
        names: &[Option<String>],
        context: LabelId,
    ) -> Result<(LC, usize)> {
        self.validate_input(i, j, intervals)?;
        if !names.is_empty() && names.len() != intervals.len() {
            return Err(Error::DisjunctNames(format!(
                "{} names for {} disjuncts",
                names.len(),
                intervals.len()
            )));
        }
        if intervals.len() == 1 && names.first().map_or(false, |n| n.is_some()) {
            return Err(Error::DisjunctNames(
                "a singleton constraint takes no disjunct name".to_owned(),
            ));
        }
        // reject clashing disjunct names before anything is minted
        let mut seen: Vec<&str> = Vec::new();
        for name in names.iter().flatten() {
            if self.labels.lookup(name).is_some() || seen.contains(&name.as_str()) {
                return Err(Error::DuplicateName(name.clone()));
            }
            seen.push(name);
        }
        let minted: Vec<LabelId> = if intervals.len() == 1 {
            vec![R0]
        } else {
            let mut out = Vec::with_capacity(intervals.len());
            for k in 0..intervals.len() {
                let name = names.get(k).cloned().flatten();
                out.push(self.labels.mint_disjunct(name)?);
            }
            self.labels.register_group(out.clone());
            for a in 0..out.len() {
                for b in a + 1..out.len() {
                    self.store.add(LabelSet::from_iter([out[a], out[b]]));
                }
            }
            out
        };
        let lecs: Vec<Lec> = intervals
            .iter()
            .zip(&minted)
            .map(|(iv, &l)| {
                let mut set = LabelSet::singleton(l);
                if context != W0 {
                    set.insert(context);
                }
                Lec::new(*iv, set)
            })
            .collect();
        let record = InputRecord {
            from: i,
            to: j,
            labels: minted,
            intervals: intervals.to_vec(),
            context,
            active: vec![true; intervals.len()],
        };
        self.inputs.push(record);
        Ok((LC::from_lecs_raw(lecs), self.inputs.len() - 1))
    }

    /// Core of the consistency test: decides acceptance and gathers the
    /// inconsistent-set candidates without touching the store.
    ///
    /// Returns (accepted, dead incoming labels, candidate sets). A label of
    /// the incoming constraint is dead when every incoming LEC carrying it
    /// misses the existing constraint entirely; candidates naming dead
    /// labels are discarded because their disjuncts are deactivated
    /// instead. Acceptance fails when the intersection is empty or when a
    /// candidate is covered by `base`, the labels that hold in every
    /// scenario the assertion applies to.
    pub(crate) fn consistency_scan(
        &self,
        existing: &LC,
        incoming: &LC,
        base: &LabelSet,
    ) -> (bool, LabelSet, Vec<LabelSet>) {
        let ctx = self.eval();
        let joint = lc_intersect(existing, incoming, &ctx);

        // which incoming labels survive into the joint constraint
        let mut dead_new = LabelSet::new();
        let mut alive = LabelSet::new();
        for y in incoming.iter() {
            let single = LC::from_lecs_raw(vec![y.clone()]);
            if lc_intersect(&single, existing, &ctx).is_empty() {
                dead_new = dead_new.union(&y.labels);
            } else {
                alive = alive.union(&y.labels);
            }
        }
        dead_new = dead_new.difference(&alive);

        let mut cands: Vec<LabelSet> = Vec::new();
        for x in existing.iter() {
            for y in incoming.iter() {
                if x.interval.intersect(&y.interval).is_none() {
                    let u = x.labels.union(&y.labels);
                    if !ctx.dead(&u) {
                        cands.push(u);
                    }
                }
            }
        }
        if !self.config.skip_case_two_records {
            for x in existing.iter() {
                let single = LC::from_lecs_raw(vec![x.clone()]);
                if lc_intersect(&single, incoming, &ctx).is_empty() && !ctx.dead(&x.labels) {
                    cands.push(x.labels.clone());
                }
            }
        }
        cands.retain(|c| !c.intersects(&dead_new));

        let accepted = !joint.is_empty() && !cands.iter().any(|c| c.is_subset(base));
        (accepted, dead_new, cands)
    }

    /// Tests an assertion against the current constraint. On acceptance the
    /// detected inconsistent sets are recorded.
    pub fn consistency_test(&mut self, existing: &LC, incoming: &LC) -> bool {
        let (ok, _, cands) = self.consistency_scan(existing, incoming, &LabelSet::singleton(R0));
        if ok {
            for c in cands {
                self.store.add(c);
            }
        }
        ok
    }

    /// Asserts a disjunctive constraint (t_j - t_i in one of `intervals`).
    /// Returns false and leaves the network untouched when the assertion is
    /// inconsistent with it.
    pub fn update(&mut self, i: NodeId, j: NodeId, intervals: &[Interval]) -> Result<bool> {
        self.update_named(i, j, intervals, &[])
    }

    pub fn update_named(
        &mut self,
        i: NodeId,
        j: NodeId,
        intervals: &[Interval],
        names: &[Option<String>],
    ) -> Result<bool> {
        let mark = self.labels.mark();
        let (incoming, rec) = self.put_labels(i, j, intervals, names, W0)?;
        let existing = self.lc[i.0][j.0].clone();
        let (ok, dead_new, cands) =
            self.consistency_scan(&existing, &incoming, &LabelSet::singleton(R0));
        if !ok {
            self.rollback_input(rec, mark);
            return Ok(false);
        }
        for c in cands {
            self.store.add(c);
        }
        let record = &mut self.inputs[rec];
        for (p, &l) in record.labels.clone().iter().enumerate() {
            if dead_new.contains(l) {
                record.active[p] = false;
            }
        }
        let fresh = {
            let ctx = self.eval();
            lc_intersect(&existing, &incoming, &ctx)
        };
        if fresh.is_empty() {
            return Err(Error::Internal("accepted assertion produced an empty constraint"));
        }
        self.set_pair(i, j, fresh);
        self.closure(i, j)?;
        Ok(true)
    }

    /// Undoes the registry record, sibling sets and minted labels of a
    /// rejected assertion.
    pub(crate) fn rollback_input(&mut self, rec: usize, mark: LabelsMark) {
        let record = self.inputs.remove(rec);
        for a in 0..record.labels.len() {
            for b in a + 1..record.labels.len() {
                self.store.remove_exact(&LabelSet::from_iter([record.labels[a], record.labels[b]]));
            }
        }
        self.labels.rollback(mark);
    }

    /// Propagates a just-tightened lc(i,j) across the network: first along
    /// i→j→k, then l→i→j, then l→i→k for the entries the first loop moved.
    pub(crate) fn closure(&mut self, i: NodeId, j: NodeId) -> Result<()> {
        let n = self.names.len();
        let mut moved: Vec<usize> = Vec::new();
        for k in 0..n {
            if k == i.0 || k == j.0 || self.lc[j.0][k].is_universal() {
                continue;
            }
            let derived = {
                let ctx = self.eval();
                lc_compose(&self.lc[i.0][j.0], &self.lc[j.0][k], &ctx)?
            };
            if self.tighten(i, NodeId(k), &derived)? {
                moved.push(k);
            }
        }
        for l in 0..n {
            if l == i.0 || l == j.0 || self.lc[l][i.0].is_universal() {
                continue;
            }
            let derived = {
                let ctx = self.eval();
                lc_compose(&self.lc[l][i.0], &self.lc[i.0][j.0], &ctx)?
            };
            self.tighten(NodeId(l), j, &derived)?;
        }
        if self.config.skip_closure_loop3 {
            return Ok(());
        }
        for &k in &moved {
            for l in 0..n {
                if l == i.0 || l == j.0 || l == k || self.lc[l][i.0].is_universal() {
                    continue;
                }
                let derived = {
                    let ctx = self.eval();
                    lc_compose(&self.lc[l][i.0], &self.lc[i.0][k], &ctx)?
                };
                self.tighten(NodeId(l), NodeId(k), &derived)?;
            }
        }
        Ok(())
    }

    /// Intersects a derived path constraint into lc(a,b), recording the
    /// label set of any existing LEC the derivation eliminates outright.
    /// Returns whether the entry changed.
    fn tighten(&mut self, a: NodeId, b: NodeId, derived: &LC) -> Result<bool> {
        if derived.is_universal() {
            return Ok(false);
        }
        let mut eliminated: Vec<LabelSet> = Vec::new();
        {
            let ctx = self.eval();
            for x in self.lc[a.0][b.0].iter() {
                let single = LC::from_lecs_raw(vec![x.clone()]);
                if lc_intersect(&single, derived, &ctx).is_empty() && !ctx.dead(&x.labels) {
                    eliminated.push(x.labels.clone());
                }
            }
        }
        for s in eliminated {
            self.store.add(s);
        }
        let fresh = {
            let ctx = self.eval();
            lc_intersect(&self.lc[a.0][b.0], derived, &ctx)
        };
        if fresh.is_empty() {
            return Err(Error::Internal("closure reached an empty constraint"));
        }
        if fresh == self.lc[a.0][b.0] {
            Ok(false)
        } else {
            self.set_pair(a, b, fresh);
            Ok(true)
        }
    }
}

impl LC {
    /// Constraint of a point with itself.
    pub(crate) fn point_zero() -> LC {
        LC::from_lecs_raw(vec![Lec::new(Interval::point(0), LabelSet::singleton(R0))])
    }
}

impl Tcn {
    /// Interval projection of lc(i,j): the live intervals, merged where
    /// they touch. The distance between the points always lies in one of
    /// them.
    pub fn projection(&self, i: NodeId, j: NodeId) -> Result<Vec<Interval>> {
        let lc = self.constraint(i, j)?;
        let ctx = self.eval();
        Ok(crate::time::union_normalize(
            lc.iter().filter(|l| !ctx.dead(&l.labels)).map(|l| l.interval).collect(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::time::Bound;

    fn iv(a: i64, b: i64) -> Interval {
        Interval::closed(a, b).unwrap()
    }

    fn at_least(a: i64) -> Interval {
        Interval::new(Bound::closed(a), Bound::pos_inf()).unwrap()
    }

    /// Builds the running four-point example: two disjunctive inputs, two
    /// origin anchors.
    fn base_net() -> (Tcn, [NodeId; 4]) {
        let mut tcn = Tcn::new(TcnConfig::default());
        let t1 = tcn.add_point("t1").unwrap();
        let t2 = tcn.add_point("t2").unwrap();
        let t3 = tcn.add_point("t3").unwrap();
        let t4 = tcn.add_point("t4").unwrap();
        assert!(tcn.update(t1, t2, &[at_least(60), iv(30, 40)]).unwrap());
        assert!(tcn.update(t3, t4, &[iv(40, 50), iv(20, 30)]).unwrap());
        assert!(tcn.update(ORIGIN, t1, &[iv(10, 20)]).unwrap());
        assert!(tcn.update(ORIGIN, t4, &[iv(60, 70)]).unwrap());
        (tcn, [t1, t2, t3, t4])
    }

    fn lset(tcn: &Tcn, names: &[&str]) -> LabelSet {
        LabelSet::from_iter(names.iter().map(|n| tcn.labels.lookup(n).unwrap()))
    }

    fn expect(tcn: &Tcn, items: &[(Interval, &[&str])]) -> LC {
        LC::from_lecs_raw(
            items.iter().map(|(i, ls)| Lec::new(*i, lset(tcn, ls))).collect(),
        )
    }

    #[test]
    fn put_labels_mints_exclusive_siblings() {
        let mut tcn = Tcn::new(TcnConfig::default());
        let t1 = tcn.add_point("t1").unwrap();
        let t2 = tcn.add_point("t2").unwrap();
        let (lc, rec) = tcn
            .put_labels(t1, t2, &[at_least(60), iv(30, 40)], &[], W0)
            .unwrap();
        assert_eq!(lc.len(), 2);
        assert!(tcn.store.covers(&lset(&tcn, &["R1", "R2"])));
        assert_eq!(tcn.inputs[rec].labels.len(), 2);

        let single = tcn.put_labels(t1, t2, &[iv(10, 20)], &[], W0).unwrap().0;
        assert_eq!(single.lecs()[0].labels, LabelSet::singleton(R0));

        assert!(matches!(
            tcn.put_labels(t1, t2, &[iv(0, 10), iv(5, 20)], &[], W0),
            Err(Error::NonDisjointDisjuncts)
        ));
    }

    #[test]
    fn intermediate_network_matches_known_state() {
        let (tcn, [t1, t2, t3, t4]) = base_net();
        let got = tcn.constraint(t3, t2).unwrap();
        let want = expect(
            &tcn,
            &[
                (at_least(40), &["R1", "R3", "R0"]),
                (at_least(20), &["R1", "R4", "R0"]),
                (iv(-10, 30), &["R2", "R4", "R0"]),
                (iv(10, 50), &["R2", "R3", "R0"]),
            ],
        );
        assert_eq!(got, &want);
        assert_eq!(
            tcn.constraint(ORIGIN, t3).unwrap(),
            &expect(&tcn, &[(iv(10, 30), &["R3", "R0"]), (iv(30, 50), &["R4", "R0"])])
        );
        assert_eq!(
            tcn.constraint(t1, t4).unwrap(),
            &expect(&tcn, &[(iv(40, 60), &["R0"])])
        );
    }

    #[test]
    fn updating_and_closing_the_running_example() {
        let (mut tcn, [t1, t2, t3, t4]) = base_net();
        assert!(tcn.update(t3, t2, &[iv(10, 20)]).unwrap());

        assert_eq!(
            tcn.constraint(t3, t2).unwrap(),
            &expect(&tcn, &[(iv(20, 20), &["R1", "R4", "R0"]), (iv(10, 20), &["R2", "R0"])])
        );
        assert_eq!(
            tcn.constraint(t3, ORIGIN).unwrap(),
            &expect(
                &tcn,
                &[
                    (iv(-30, -20), &["R2", "R3", "R0"]),
                    (iv(-50, -50), &["R4", "R1", "R0"]),
                    (iv(-50, -30), &["R4", "R2", "R0"]),
                ]
            )
        );
        assert_eq!(
            tcn.constraint(t3, t1).unwrap(),
            &expect(
                &tcn,
                &[
                    (iv(-20, -10), &["R3", "R2", "R0"]),
                    (iv(-40, -40), &["R4", "R1", "R0"]),
                    (iv(-30, -10), &["R4", "R2", "R0"]),
                ]
            )
        );
        assert_eq!(
            tcn.constraint(t3, t4).unwrap(),
            &expect(
                &tcn,
                &[
                    (iv(40, 50), &["R3", "R2", "R0"]),
                    (iv(20, 30), &["R4", "R2", "R0"]),
                    (iv(20, 20), &["R4", "R1", "R0"]),
                ]
            )
        );

        let want_store = vec![
            vec![
                tcn.labels.lookup("R1").unwrap(),
                tcn.labels.lookup("R2").unwrap(),
            ],
            vec![
                tcn.labels.lookup("R3").unwrap(),
                tcn.labels.lookup("R4").unwrap(),
            ],
            vec![
                R0,
                tcn.labels.lookup("R1").unwrap(),
                tcn.labels.lookup("R3").unwrap(),
            ],
        ];
        let mut want_sorted: Vec<Vec<u32>> = want_store;
        want_sorted.sort();
        assert_eq!(tcn.store.sorted_sets(), want_sorted);
    }

    #[test]
    fn three_way_disjunction_reaches_known_minimal_state() {
        // four points reaching a shared endpoint, one input per traveller:
        // a singleton, a two-way and a three-way disjunction
        let mut tcn = Tcn::new(TcnConfig::default());
        let t1 = tcn.add_point("t1").unwrap();
        let t2 = tcn.add_point("t2").unwrap();
        let t3 = tcn.add_point("t3").unwrap();
        let t4 = tcn.add_point("t4").unwrap();
        for t in [t1, t2, t3] {
            assert!(tcn.update(ORIGIN, t, &[iv(0, 60)]).unwrap());
        }
        assert!(tcn.update(ORIGIN, t4, &[iv(0, 70)]).unwrap());
        assert!(tcn.update(t1, t4, &[iv(25, 50)]).unwrap());
        assert!(tcn.update(t2, t4, &[iv(10, 30), iv(45, 60)]).unwrap());
        assert!(tcn
            .update(t3, t4, &[iv(15, 20), iv(35, 40), iv(55, 60)])
            .unwrap());

        assert_eq!(
            tcn.constraint(ORIGIN, t1).unwrap(),
            &expect(
                &tcn,
                &[
                    (iv(5, 45), &["R0", "R5"]),
                    (iv(0, 45), &["R0", "R4"]),
                    (iv(0, 45), &["R0", "R3"]),
                ]
            )
        );
        assert_eq!(
            tcn.constraint(ORIGIN, t2).unwrap(),
            &expect(
                &tcn,
                &[
                    (iv(0, 25), &["R2", "R0"]),
                    (iv(5, 60), &["R1", "R0", "R4"]),
                    (iv(25, 60), &["R1", "R0", "R5"]),
                    (iv(0, 60), &["R1", "R0", "R3"]),
                ]
            )
        );
        assert_eq!(
            tcn.constraint(ORIGIN, t3).unwrap(),
            &expect(
                &tcn,
                &[
                    (iv(25, 55), &["R0", "R2", "R3"]),
                    (iv(0, 15), &["R0", "R5"]),
                    (iv(0, 35), &["R0", "R1", "R4"]),
                    (iv(5, 55), &["R0", "R1", "R3"]),
                    (iv(5, 35), &["R0", "R2", "R4"]),
                ]
            )
        );
        assert_eq!(
            tcn.constraint(t2, t1).unwrap(),
            &expect(
                &tcn,
                &[(iv(-5, 35), &["R0", "R2"]), (iv(-40, 5), &["R0", "R1"])]
            )
        );
        assert_eq!(
            tcn.constraint(t3, t1).unwrap(),
            &expect(
                &tcn,
                &[
                    (iv(-15, 15), &["R0", "R4"]),
                    (iv(-35, -5), &["R0", "R3"]),
                    (iv(5, 35), &["R0", "R5"]),
                ]
            )
        );
        assert_eq!(
            tcn.constraint(t3, t2).unwrap(),
            &expect(
                &tcn,
                &[
                    (iv(5, 30), &["R1", "R0", "R4"]),
                    (iv(-45, -25), &["R2", "R0", "R3"]),
                    (iv(25, 50), &["R1", "R0", "R5"]),
                    (iv(-15, 10), &["R1", "R0", "R3"]),
                    (iv(-25, -5), &["R2", "R0", "R4"]),
                    (iv(-5, 15), &["R2", "R0", "R5"]),
                ]
            )
        );

        let want: Vec<Vec<u32>> = {
            let mut v: Vec<Vec<u32>> = [["R1", "R2"], ["R3", "R4"], ["R3", "R5"], ["R4", "R5"]]
                .iter()
                .map(|pair| {
                    let mut ids: Vec<u32> =
                        pair.iter().map(|n| tcn.labels.lookup(n).unwrap()).collect();
                    ids.sort_unstable();
                    ids
                })
                .collect();
            v.sort();
            v
        };
        assert_eq!(tcn.store.sorted_sets(), want);
    }

    #[test]
    fn consistency_test_records_only_surviving_candidates() {
        let mut tcn = Tcn::new(TcnConfig::default());
        tcn.add_point("a").unwrap();
        tcn.add_point("b").unwrap();
        let r1 = tcn.labels.mint_disjunct(Some("r1".into())).unwrap();
        let r2 = tcn.labels.mint_disjunct(Some("r2".into())).unwrap();
        let ra = tcn.labels.mint_disjunct(Some("ra".into())).unwrap();
        let r3 = tcn.labels.mint_disjunct(Some("r3".into())).unwrap();
        let r4 = tcn.labels.mint_disjunct(Some("r4".into())).unwrap();
        let rb = tcn.labels.mint_disjunct(Some("rb".into())).unwrap();
        let one = |a, b, l: LabelId| Lec::new(iv(a, b), LabelSet::singleton(l));
        let existing =
            LC::from_lecs_raw(vec![one(0, 10, r1), one(20, 25, r2), one(100, 110, ra)]);
        let incoming =
            LC::from_lecs_raw(vec![one(0, 30, r3), one(40, 50, r4), one(-50, -40, rb)]);
        let before = tcn.store.len();
        assert!(tcn.consistency_test(&existing, &incoming));
        assert_eq!(tcn.store.len(), before + 1);
        assert!(tcn.store.covers(&LabelSet::singleton(ra)));
        assert!(!tcn.store.covers(&LabelSet::from_iter([r4, r2])));
        assert!(!tcn.store.covers(&LabelSet::from_iter([r4, r1])));
        assert!(!tcn.store.covers(&LabelSet::singleton(rb)));
    }

    #[test]
    fn rejected_update_rolls_back() {
        let (mut tcn, [t1, _, _, t4]) = base_net();
        let labels_before = tcn.labels.count();
        let store_before = tcn.store.sorted_sets();
        let inputs_before = tcn.inputs.len();
        let lc_before = tcn.constraint(t1, t4).unwrap().clone();

        // t4 - t1 is pinned to [40,60]; neither assertion can hold
        assert!(!tcn.update(t1, t4, &[iv(1000, 1000)]).unwrap());
        assert!(!tcn.update(t1, t4, &[iv(1000, 1000), iv(2000, 2000)]).unwrap());

        assert_eq!(tcn.labels.count(), labels_before);
        assert_eq!(tcn.store.sorted_sets(), store_before);
        assert_eq!(tcn.inputs.len(), inputs_before);
        assert_eq!(tcn.constraint(t1, t4).unwrap(), &lc_before);
    }

    #[test]
    fn reasserting_verbatim_changes_nothing() {
        let (mut tcn, [_, t2, t3, _]) = base_net();
        assert!(tcn.update(t3, t2, &[iv(10, 20)]).unwrap());
        let snapshot: Vec<LC> = (0..tcn.node_count())
            .flat_map(|i| (0..tcn.node_count()).map(move |j| (i, j)))
            .map(|(i, j)| tcn.constraint(NodeId(i), NodeId(j)).unwrap().clone())
            .collect();
        let store = tcn.store.sorted_sets();
        assert!(tcn.update(t3, t2, &[iv(10, 20)]).unwrap());
        let after: Vec<LC> = (0..tcn.node_count())
            .flat_map(|i| (0..tcn.node_count()).map(move |j| (i, j)))
            .map(|(i, j)| tcn.constraint(NodeId(i), NodeId(j)).unwrap().clone())
            .collect();
        assert_eq!(snapshot, after);
        assert_eq!(store, tcn.store.sorted_sets());
    }

    #[test]
    fn inverse_invariant_holds_everywhere() {
        let (mut tcn, [_, t2, t3, _]) = base_net();
        tcn.update(t3, t2, &[iv(10, 20)]).unwrap();
        for i in 0..tcn.node_count() {
            for j in 0..tcn.node_count() {
                let a = tcn.constraint(NodeId(i), NodeId(j)).unwrap();
                let b = tcn.constraint(NodeId(j), NodeId(i)).unwrap();
                assert_eq!(&lc_inverse(a), b, "pair ({i},{j})");
            }
        }
    }

    #[test]
    fn dead_disjuncts_are_deactivated_not_rejected() {
        let mut tcn = Tcn::new(TcnConfig::default());
        let a = tcn.add_point("a").unwrap();
        let b = tcn.add_point("b").unwrap();
        assert!(tcn.update(a, b, &[iv(0, 10)]).unwrap());
        // second disjunct cannot hold against [0,10]
        assert!(tcn.update(a, b, &[iv(5, 8), iv(50, 60)]).unwrap());
        let rec = tcn.inputs.last().unwrap();
        assert_eq!(rec.active, vec![true, false]);
        // the dead label never shows up in the final constraint
        let dead = rec.labels[1];
        let lc = tcn.constraint(a, b).unwrap();
        assert!(lc.iter().all(|l| !l.labels.contains(dead)));
    }

    #[test]
    fn add_point_default_anchor() {
        let mut tcn = Tcn::new(TcnConfig::default());
        let t = tcn.add_point("t").unwrap();
        assert_eq!(
            tcn.constraint(ORIGIN, t).unwrap(),
            &expect(&tcn, &[(at_least(0), &["R0"])])
        );
        let mut off = TcnConfig::default();
        off.default_origin_constraint = false;
        let mut tcn2 = Tcn::new(off);
        let t = tcn2.add_point("t").unwrap();
        assert!(tcn2.constraint(ORIGIN, t).unwrap().is_universal());
        assert!(tcn2.add_point("t").is_err());
    }

    #[test]
    fn path_consistency_after_closure() {
        let (mut tcn, [_, t2, t3, _]) = base_net();
        tcn.update(t3, t2, &[iv(10, 20)]).unwrap();
        let n = tcn.node_count();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let direct = tcn.projection(NodeId(i), NodeId(j)).unwrap();
                for k in 0..n {
                    if k == i || k == j {
                        continue;
                    }
                    let ctx = tcn.eval();
                    let path = lc_compose(
                        tcn.constraint(NodeId(i), NodeId(k)).unwrap(),
                        tcn.constraint(NodeId(k), NodeId(j)).unwrap(),
                        &ctx,
                    )
                    .unwrap();
                    let path_proj = crate::time::union_normalize(
                        path.iter().map(|l| l.interval).collect(),
                    );
                    for d in &direct {
                        assert!(
                            path_proj.iter().any(|p| p.contains_interval(d)),
                            "projection of lc({i},{j}) must lie within the {i}->{k}->{j} path"
                        );
                    }
                }
            }
        }
    }
}
