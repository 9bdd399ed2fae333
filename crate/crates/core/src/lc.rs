//! Labeled constraints and their algebra.
//!
//! A labeled constraint (LC) is a set of labeled elemental constraints
//! (LECs): interval plus label set. The label set names the input disjuncts
//! and contexts an LEC depends on; an LEC applies in exactly the scenarios
//! that select all of its labels. Union, composition and intersection keep
//! results normalized: label-inconsistent LECs are dropped, dominated LECs
//! are dropped, and complete sibling groups with a shared interval collapse
//! to their common labels.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::Result;
use crate::ilset::ILSetStore;
use crate::label::{LabelId, LabelSet, Labels, R0};
use crate::time::{Interval, TimeValue};

/// One labeled elemental constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lec {
    pub interval: Interval,
    pub labels: LabelSet,
}

impl Lec {
    pub fn new(interval: Interval, labels: LabelSet) -> Lec {
        Lec { interval, labels }
    }

    fn key(&self) -> (TimeValue, bool, TimeValue, bool, LabelSet) {
        let (a, b, c, d) = self.interval.sort_key();
        (a, b, c, d, self.labels.clone())
    }
}

/// `a` makes `b` redundant: a tighter interval under a label set that
/// applies at least as often.
pub fn lec_includes(a: &Lec, b: &Lec) -> bool {
    b.interval.contains_interval(&a.interval) && a.labels.is_subset(&b.labels)
}

/// A labeled constraint: canonically sorted LECs. The empty LC is the
/// inconsistent constraint.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LC {
    lecs: Vec<Lec>,
}

impl LC {
    pub fn empty() -> LC {
        LC::default()
    }

    /// The no-information constraint: one unbounded interval labeled {R0}.
    pub fn universal() -> LC {
        LC { lecs: vec![Lec::new(Interval::unbounded(), LabelSet::singleton(R0))] }
    }

    pub fn is_empty(&self) -> bool {
        self.lecs.is_empty()
    }

    pub fn is_universal(&self) -> bool {
        self.lecs.len() == 1 && self.lecs[0].interval.is_unbounded()
    }

    pub fn len(&self) -> usize {
        self.lecs.len()
    }

    pub fn lecs(&self) -> &[Lec] {
        &self.lecs
    }

    pub fn iter(&self) -> impl Iterator<Item = &Lec> {
        self.lecs.iter()
    }

    /// Builds an LC from raw LECs without consulting any store: sorts,
    /// dedups and applies dominance only. Inputs are assumed live.
    pub fn from_lecs_raw(lecs: Vec<Lec>) -> LC {
        let mut out = LC { lecs };
        out.sort_dedup_dominate();
        out
    }
}

/// Evaluation context shared by the algebra: the inconsistent-set store,
/// an optional second store consulted only for filtering (context
/// separation sets live there), sibling groups, and the magnitude cap.
#[derive(Clone, Copy)]
pub struct EvalCtx<'a> {
    pub store: &'a ILSetStore,
    pub extra: Option<&'a ILSetStore>,
    pub labels: &'a Labels,
    pub cap: i64,
}

impl<'a> EvalCtx<'a> {
    pub fn new(store: &'a ILSetStore, labels: &'a Labels, cap: i64) -> EvalCtx<'a> {
        EvalCtx { store, extra: None, labels, cap }
    }

    pub fn with_extra(mut self, extra: &'a ILSetStore) -> EvalCtx<'a> {
        self.extra = Some(extra);
        self
    }

    pub fn dead(&self, labels: &LabelSet) -> bool {
        self.store.covers(labels) || self.extra.map_or(false, |e| e.covers(labels))
    }
}

impl LC {
    fn sort_dedup_dominate(&mut self) {
        self.lecs.sort_by(|a, b| a.key().cmp(&b.key()));
        self.lecs.dedup();
        let n = self.lecs.len();
        let mut keep = vec![true; n];
        for i in 0..n {
            if !keep[i] {
                continue;
            }
            for j in 0..n {
                if i != j && keep[j] && lec_includes(&self.lecs[i], &self.lecs[j]) {
                    keep[j] = false;
                }
            }
        }
        let mut k = 0;
        self.lecs.retain(|_| {
            k += 1;
            keep[k - 1]
        });
    }

    /// One pass of exhaustive sibling merging. For each sibling group, LECs
    /// that share an interval and differ only in which single group member
    /// they carry collapse to the common labels once every member is
    /// present. Returns true when anything merged.
    fn sibling_merge(&mut self, labels: &Labels) -> bool {
        let mut merged_any = false;
        for g in 0..labels.group_count() {
            let members = labels.group_members(g);
            // bucket by (interval, labels minus the one group member)
            let mut buckets: BTreeMap<
                ((TimeValue, bool, TimeValue, bool), LabelSet),
                Vec<(LabelId, usize)>,
            > = BTreeMap::new();
            for (idx, lec) in self.lecs.iter().enumerate() {
                let mut found: Option<LabelId> = None;
                let mut hits = 0;
                for &m in members {
                    if lec.labels.contains(m) {
                        hits += 1;
                        found = Some(m);
                    }
                }
                if hits != 1 {
                    continue;
                }
                let m = found.unwrap();
                let mut rest = lec.labels.clone();
                rest.remove(m);
                buckets.entry((lec.interval.sort_key(), rest)).or_default().push((m, idx));
            }
            let mut drop: Vec<usize> = Vec::new();
            let mut add: Vec<Lec> = Vec::new();
            for ((_, rest), entries) in buckets {
                let mut present = LabelSet::new();
                for &(m, _) in &entries {
                    present.insert(m);
                }
                if members.iter().all(|&m| present.contains(m)) {
                    // complete group: keep one merged LEC with the rest labels
                    let interval = self.lecs[entries[0].1].interval;
                    drop.extend(entries.iter().map(|&(_, idx)| idx));
                    add.push(Lec::new(interval, rest));
                    merged_any = true;
                }
            }
            if !drop.is_empty() {
                drop.sort_unstable();
                for &idx in drop.iter().rev() {
                    self.lecs.swap_remove(idx);
                }
                self.lecs.extend(add);
            }
        }
        merged_any
    }

    /// Full normalization: inconsistency filter, dominance, sibling merge,
    /// repeated to a fixed point, ending canonically sorted.
    fn normalize(&mut self, ctx: &EvalCtx<'_>) {
        self.lecs.retain(|l| !ctx.dead(&l.labels));
        loop {
            self.sort_dedup_dominate();
            if !self.sibling_merge(ctx.labels) {
                break;
            }
        }
    }
}

/// Union of two labeled constraints, fully normalized.
pub fn lc_union(a: &LC, b: &LC, ctx: &EvalCtx<'_>) -> LC {
    let mut lecs = a.lecs.clone();
    lecs.extend(b.lecs.iter().cloned());
    let mut out = LC { lecs };
    out.normalize(ctx);
    out
}

/// Re-normalizes a single constraint under the current store. Needed after
/// new inconsistent sets are recorded.
pub fn lc_normalize(a: &LC, ctx: &EvalCtx<'_>) -> LC {
    let mut out = a.clone();
    out.normalize(ctx);
    out
}

/// Temporal composition: pairwise interval sums with label unions.
pub fn lc_compose(a: &LC, b: &LC, ctx: &EvalCtx<'_>) -> Result<LC> {
    let mut lecs = Vec::with_capacity(a.lecs.len() * b.lecs.len());
    for x in &a.lecs {
        for y in &b.lecs {
            let labels = x.labels.union(&y.labels);
            if ctx.dead(&labels) {
                continue;
            }
            lecs.push(Lec::new(x.interval.compose(&y.interval, ctx.cap)?, labels));
        }
    }
    let mut out = LC { lecs };
    out.normalize(ctx);
    Ok(out)
}

/// Temporal intersection: pairwise interval intersections with label
/// unions; empty means the combination is inconsistent.
pub fn lc_intersect(a: &LC, b: &LC, ctx: &EvalCtx<'_>) -> LC {
    let mut lecs = Vec::new();
    for x in &a.lecs {
        for y in &b.lecs {
            if let Some(iv) = x.interval.intersect(&y.interval) {
                let labels = x.labels.union(&y.labels);
                if !ctx.dead(&labels) {
                    lecs.push(Lec::new(iv, labels));
                }
            }
        }
    }
    let mut out = LC { lecs };
    out.normalize(ctx);
    out
}

/// Mirrors every interval; labels are untouched. Inverse of lc(i,j) is
/// lc(j,i).
pub fn lc_inverse(a: &LC) -> LC {
    let mut out = LC { lecs: a.lecs.iter().map(|l| Lec::new(l.interval.inverse(), l.labels.clone())).collect() };
    out.sort_dedup_dominate();
    out
}

impl LC {
    /// Renders with registry names, LECs in descending interval order,
    /// like `[20,20]{R1,R4,R0} | [10,20]{R2,R0}`.
    pub fn render(&self, labels: &Labels) -> String {
        if self.lecs.is_empty() {
            return "{}".to_owned();
        }
        let mut order: Vec<&Lec> = self.lecs.iter().collect();
        order.sort_by(|a, b| b.key().cmp(&a.key()));
        order
            .iter()
            .map(|l| format!("{}{}", l.interval, labels.render_set(&l.labels)))
            .collect::<Vec<_>>()
            .join(" | ")
    }
}

impl fmt::Display for LC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lecs.is_empty() {
            return write!(f, "{{}}");
        }
        for (k, lec) in self.lecs.iter().enumerate() {
            if k > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{}{}", lec.interval, lec.labels)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::Labels;

    const CAP: i64 = 1 << 40;

    fn iv(lo: i64, hi: i64) -> Interval {
        Interval::closed(lo, hi).unwrap()
    }

    fn set(ids: &[LabelId]) -> LabelSet {
        LabelSet::from_iter(ids.iter().copied())
    }

    fn lc(items: &[(Interval, &[LabelId])]) -> LC {
        LC::from_lecs_raw(
            items.iter().map(|(i, ls)| Lec::new(*i, set(ls))).collect(),
        )
    }

    /// Labels R1..Rn minted in order; returns their ids (R1 first).
    fn mint(labels: &mut Labels, n: usize) -> Vec<LabelId> {
        (0..n).map(|_| labels.mint_disjunct(None).unwrap()).collect()
    }

    #[test]
    fn union_drops_dominated() {
        let store = ILSetStore::new();
        let mut labels = Labels::new();
        let ids = mint(&mut labels, 9);
        let (r1, r3, r5, r6, r7, r8, r9) =
            (ids[0], ids[2], ids[4], ids[5], ids[6], ids[7], ids[8]);
        let ctx = EvalCtx::new(&store, &labels, CAP);
        let a = lc(&[(iv(10, 30), &[r1, r3, r5, r9]), (iv(40, 40), &[r6, r7])]);
        let b = lc(&[(iv(10, 20), &[r1, r3]), (iv(40, 40), &[r6, r7, r8])]);
        let got = lc_union(&a, &b, &ctx);
        assert_eq!(got, lc(&[(iv(10, 20), &[r1, r3]), (iv(40, 40), &[r6, r7])]));
    }

    #[test]
    fn union_with_empty_normalizes() {
        let store = ILSetStore::new();
        let labels = Labels::new();
        let ctx = EvalCtx::new(&store, &labels, CAP);
        let a = lc(&[(iv(0, 5), &[R0]), (iv(0, 5), &[R0])]);
        assert_eq!(lc_union(&a, &LC::empty(), &ctx).len(), 1);
    }

    #[test]
    fn union_merges_complete_sibling_group() {
        let mut store = ILSetStore::new();
        let mut labels = Labels::new();
        let ids = mint(&mut labels, 4);
        let (r2, r3, r4) = (ids[1], ids[2], ids[3]);
        labels.register_group(vec![r3, r4]);
        store.add(set(&[r3, r4]));
        let ctx = EvalCtx::new(&store, &labels, CAP);
        let a = lc(&[(iv(10, 20), &[r2, r3, R0])]);
        let b = lc(&[(iv(10, 20), &[r2, r4, R0])]);
        assert_eq!(lc_union(&a, &b, &ctx), lc(&[(iv(10, 20), &[r2, R0])]));
    }

    #[test]
    fn union_is_idempotent_and_commutative() {
        let store = ILSetStore::new();
        let mut labels = Labels::new();
        let ids = mint(&mut labels, 2);
        let ctx = EvalCtx::new(&store, &labels, CAP);
        let a = lc(&[(iv(0, 10), &[ids[0]]), (iv(5, 25), &[ids[1]])]);
        let b = lc(&[(iv(2, 8), &[ids[0], ids[1]])]);
        assert_eq!(lc_union(&a, &a, &ctx), a);
        assert_eq!(lc_union(&a, &b, &ctx), lc_union(&b, &a, &ctx));
    }

    #[test]
    fn compose_pairwise_sums() {
        let store = ILSetStore::new();
        let mut labels = Labels::new();
        let ids = mint(&mut labels, 4);
        let (r1, r2, r3, r4) = (ids[0], ids[1], ids[2], ids[3]);
        let ctx = EvalCtx::new(&store, &labels, CAP);
        let a = lc(&[(iv(0, 10), &[r1]), (iv(20, 30), &[r2])]);
        let b = lc(&[(iv(100, 200), &[r3]), (iv(300, 400), &[r4])]);
        let got = lc_compose(&a, &b, &ctx).unwrap();
        let want = lc(&[
            (iv(100, 210), &[r1, r3]),
            (iv(300, 410), &[r1, r4]),
            (iv(120, 230), &[r2, r3]),
            (iv(320, 430), &[r2, r4]),
        ]);
        assert_eq!(got, want);
    }

    #[test]
    fn compose_filters_inconsistent_combinations() {
        let mut store = ILSetStore::new();
        let mut labels = Labels::new();
        let ids = mint(&mut labels, 3);
        let (r1, r3) = (ids[0], ids[2]);
        store.add(set(&[r1, r3]));
        let ctx = EvalCtx::new(&store, &labels, CAP);
        let a = lc(&[(iv(0, 1), &[r1])]);
        let b = lc(&[(iv(2, 3), &[r3])]);
        assert!(lc_compose(&a, &b, &ctx).unwrap().is_empty());
    }

    #[test]
    fn compose_singletons() {
        let store = ILSetStore::new();
        let labels = Labels::new();
        let ctx = EvalCtx::new(&store, &labels, CAP);
        let a = lc(&[(iv(5, 5), &[R0])]);
        let b = lc(&[(iv(3, 4), &[R0])]);
        assert_eq!(lc_compose(&a, &b, &ctx).unwrap(), lc(&[(iv(8, 9), &[R0])]));
    }

    #[test]
    fn intersect_pairwise() {
        let store = ILSetStore::new();
        let mut labels = Labels::new();
        let ids = mint(&mut labels, 4);
        let (r1, r2, r3, r4) = (ids[0], ids[1], ids[2], ids[3]);
        let ctx = EvalCtx::new(&store, &labels, CAP);
        let a = lc(&[(iv(0, 10), &[r1]), (iv(20, 25), &[r2])]);
        let b = lc(&[(iv(0, 30), &[r3]), (iv(40, 50), &[r4])]);
        let got = lc_intersect(&a, &b, &ctx);
        assert_eq!(got, lc(&[(iv(0, 10), &[r1, r3]), (iv(20, 25), &[r2, r3])]));
    }

    #[test]
    fn intersect_with_universal_folds_r0() {
        let store = ILSetStore::new();
        let mut labels = Labels::new();
        let ids = mint(&mut labels, 1);
        let ctx = EvalCtx::new(&store, &labels, CAP);
        let a = lc(&[(iv(3, 9), &[ids[0]])]);
        let got = lc_intersect(&a, &LC::universal(), &ctx);
        assert_eq!(got, lc(&[(iv(3, 9), &[ids[0], R0])]));
    }

    #[test]
    fn intersect_disjoint_is_empty() {
        let store = ILSetStore::new();
        let mut labels = Labels::new();
        let ids = mint(&mut labels, 2);
        let ctx = EvalCtx::new(&store, &labels, CAP);
        let a = lc(&[(iv(0, 5), &[ids[0]])]);
        let b = lc(&[(iv(10, 20), &[ids[1]])]);
        assert!(lc_intersect(&a, &b, &ctx).is_empty());
    }

    #[test]
    fn lec_inclusion_examples() {
        let mut labels = Labels::new();
        let ids = mint(&mut labels, 9);
        let (r1, r3, r5, r6, r7, r8, r9) =
            (ids[0], ids[2], ids[4], ids[5], ids[6], ids[7], ids[8]);
        let a = Lec::new(iv(10, 20), set(&[r1, r3]));
        let b = Lec::new(iv(10, 30), set(&[r1, r3, r5, r9]));
        assert!(lec_includes(&a, &b));
        let c = Lec::new(iv(40, 40), set(&[r6, r7]));
        let d = Lec::new(iv(40, 40), set(&[r6, r7, r8]));
        assert!(lec_includes(&c, &d));
        let e = Lec::new(iv(10, 30), set(&[r1]));
        let f = Lec::new(iv(10, 20), set(&[r1]));
        assert!(!lec_includes(&e, &f));
    }

    #[test]
    fn inverse_mirrors_and_is_involutive() {
        let mut labels = Labels::new();
        let ids = mint(&mut labels, 2);
        let a = lc(&[(iv(10, 20), &[R0])]);
        assert_eq!(lc_inverse(&a), lc(&[(iv(-20, -10), &[R0])]));
        let b = LC::from_lecs_raw(vec![
            Lec::new(
                Interval::new(crate::time::Bound::closed(60), crate::time::Bound::pos_inf())
                    .unwrap(),
                set(&[ids[0]]),
            ),
            Lec::new(iv(30, 40), set(&[ids[1]])),
        ]);
        let inv = lc_inverse(&b);
        assert_eq!(lc_inverse(&inv), b);
        let rendered: Vec<String> =
            inv.iter().map(|l| format!("{}", l.interval)).collect();
        assert_eq!(rendered, vec!["(-inf,-60]".to_owned(), "[-40,-30]".to_owned()]);
    }

    #[test]
    fn compose_distributes_over_intersect() {
        let mut store = ILSetStore::new();
        let mut labels = Labels::new();
        let ids = mint(&mut labels, 4);
        let (r1, r2, r3, r4) = (ids[0], ids[1], ids[2], ids[3]);
        labels.register_group(vec![r1, r2]);
        labels.register_group(vec![r3, r4]);
        store.add(set(&[r1, r2]));
        store.add(set(&[r3, r4]));
        let ctx = EvalCtx::new(&store, &labels, CAP);
        let a = lc(&[(iv(0, 1), &[r1]), (iv(10, 20), &[r2])]);
        let b = lc(&[(iv(25, 50), &[R0])]);
        let c = lc(&[(iv(0, 30), &[r3]), (iv(40, 50), &[r4])]);

        let lhs = lc_compose(&a, &lc_intersect(&b, &c, &ctx), &ctx).unwrap();
        let rhs = lc_intersect(
            &lc_compose(&a, &b, &ctx).unwrap(),
            &lc_compose(&a, &c, &ctx).unwrap(),
            &ctx,
        );
        let want = lc(&[
            (iv(25, 31), &[r1, r3, R0]),
            (iv(40, 51), &[r1, r4, R0]),
            (iv(35, 50), &[r3, r2, R0]),
            (iv(50, 70), &[r4, r2, R0]),
        ]);
        assert_eq!(lhs, want);
        assert_eq!(rhs, want);
    }
}
