//! Exact time values and metric intervals with open, closed and infinite
//! endpoints.
//!
//! All finite values are signed integers at the session granularity. No
//! floating point is used anywhere, so equality of derived results is exact.

use std::fmt;

use crate::error::{Error, Result};

/// Default cap on the magnitude of finite values (2^40).
pub const DEFAULT_VALUE_CAP: i64 = 1 << 40;

/// A time value: a finite integer or one of the two infinities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TimeValue {
    NegInf,
    Finite(i64),
    PosInf,
}

impl TimeValue {
    pub fn finite(self) -> Option<i64> {
        match self {
            TimeValue::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, TimeValue::Finite(_))
    }

    pub fn neg(self) -> TimeValue {
        match self {
            TimeValue::NegInf => TimeValue::PosInf,
            TimeValue::PosInf => TimeValue::NegInf,
            TimeValue::Finite(v) => TimeValue::Finite(-v),
        }
    }

    /// Sum under the session cap. Opposite infinities never meet when both
    /// operands are the same side (lower or upper) of non-empty intervals.
    pub fn add(self, other: TimeValue, cap: i64) -> Result<TimeValue> {
        use TimeValue::*;
        match (self, other) {
            (Finite(a), Finite(b)) => {
                let s = a.checked_add(b).ok_or(Error::NumericRange(cap))?;
                if s.abs() > cap {
                    return Err(Error::NumericRange(cap));
                }
                Ok(Finite(s))
            }
            (PosInf, NegInf) | (NegInf, PosInf) => Err(Error::Internal("opposite infinities summed")),
            (PosInf, _) | (_, PosInf) => Ok(PosInf),
            (NegInf, _) | (_, NegInf) => Ok(NegInf),
        }
    }
}

impl fmt::Display for TimeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeValue::NegInf => write!(f, "-inf"),
            TimeValue::PosInf => write!(f, "+inf"),
            TimeValue::Finite(v) => write!(f, "{v}"),
        }
    }
}

/// One endpoint of an interval. Infinite endpoints are always open.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bound {
    pub value: TimeValue,
    pub open: bool,
}

impl Bound {
    pub fn new(value: TimeValue, open: bool) -> Bound {
        let open = open || !value.is_finite();
        Bound { value, open }
    }

    pub fn closed(v: i64) -> Bound {
        Bound { value: TimeValue::Finite(v), open: false }
    }

    pub fn open(v: i64) -> Bound {
        Bound { value: TimeValue::Finite(v), open: true }
    }

    pub fn neg_inf() -> Bound {
        Bound { value: TimeValue::NegInf, open: true }
    }

    pub fn pos_inf() -> Bound {
        Bound { value: TimeValue::PosInf, open: true }
    }
}

/// A non-empty interval over time values. Emptiness is represented by
/// absence (`Option<Interval>` from the constructors), never by a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Bound,
    hi: Bound,
}

impl Interval {
    /// Builds an interval, returning `None` when the bounds describe the
    /// empty set.
    pub fn new(lo: Bound, hi: Bound) -> Option<Interval> {
        if lo.value == TimeValue::PosInf || hi.value == TimeValue::NegInf {
            return None;
        }
        match lo.value.cmp(&hi.value) {
            std::cmp::Ordering::Greater => None,
            std::cmp::Ordering::Equal => {
                if lo.open || hi.open {
                    None
                } else {
                    Some(Interval { lo, hi })
                }
            }
            std::cmp::Ordering::Less => Some(Interval { lo, hi }),
        }
    }

    pub fn closed(a: i64, b: i64) -> Option<Interval> {
        Interval::new(Bound::closed(a), Bound::closed(b))
    }

    pub fn point(v: i64) -> Interval {
        Interval { lo: Bound::closed(v), hi: Bound::closed(v) }
    }

    pub fn unbounded() -> Interval {
        Interval { lo: Bound::neg_inf(), hi: Bound::pos_inf() }
    }

    pub fn lo(&self) -> Bound {
        self.lo
    }

    pub fn hi(&self) -> Bound {
        self.hi
    }

    pub fn is_unbounded(&self) -> bool {
        self.lo.value == TimeValue::NegInf && self.hi.value == TimeValue::PosInf
    }

    /// Interval sum: both endpoints add, openness propagates.
    pub fn compose(&self, other: &Interval, cap: i64) -> Result<Interval> {
        let lo = Bound::new(self.lo.value.add(other.lo.value, cap)?, self.lo.open || other.lo.open);
        let hi = Bound::new(self.hi.value.add(other.hi.value, cap)?, self.hi.open || other.hi.open);
        Ok(Interval { lo, hi })
    }

    /// Set intersection; `None` when disjoint.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = tighter_lo(self.lo, other.lo);
        let hi = tighter_hi(self.hi, other.hi);
        Interval::new(lo, hi)
    }

    /// Mirror image: the constraint read in the opposite direction.
    pub fn inverse(&self) -> Interval {
        Interval {
            lo: Bound::new(self.hi.value.neg(), self.hi.open),
            hi: Bound::new(self.lo.value.neg(), self.lo.open),
        }
    }

    /// True when `other` is a subset of `self`.
    pub fn contains_interval(&self, other: &Interval) -> bool {
        lo_covers(self.lo, other.lo) && hi_covers(self.hi, other.hi)
    }

    pub fn contains_value(&self, v: i64) -> bool {
        let above_lo = match self.lo.value {
            TimeValue::NegInf => true,
            TimeValue::Finite(l) => {
                if self.lo.open {
                    v > l
                } else {
                    v >= l
                }
            }
            TimeValue::PosInf => false,
        };
        let below_hi = match self.hi.value {
            TimeValue::PosInf => true,
            TimeValue::Finite(h) => {
                if self.hi.open {
                    v < h
                } else {
                    v <= h
                }
            }
            TimeValue::NegInf => false,
        };
        above_lo && below_hi
    }

    /// Sort key placing intervals in left-to-right reading order.
    pub fn sort_key(&self) -> (TimeValue, bool, TimeValue, bool) {
        // closed lower bounds start earlier than open ones at the same value;
        // open upper bounds end earlier than closed ones.
        (self.lo.value, self.lo.open, self.hi.value, !self.hi.open)
    }
}

// Lower bounds: the larger value is tighter; on ties an open bound is tighter.
fn tighter_lo(a: Bound, b: Bound) -> Bound {
    match a.value.cmp(&b.value) {
        std::cmp::Ordering::Greater => a,
        std::cmp::Ordering::Less => b,
        std::cmp::Ordering::Equal => Bound::new(a.value, a.open || b.open),
    }
}

fn tighter_hi(a: Bound, b: Bound) -> Bound {
    match a.value.cmp(&b.value) {
        std::cmp::Ordering::Less => a,
        std::cmp::Ordering::Greater => b,
        std::cmp::Ordering::Equal => Bound::new(a.value, a.open || b.open),
    }
}

// a covers b on the lower side when a starts at or before b.
fn lo_covers(a: Bound, b: Bound) -> bool {
    match a.value.cmp(&b.value) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => !a.open || b.open,
    }
}

fn hi_covers(a: Bound, b: Bound) -> bool {
    match a.value.cmp(&b.value) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => !a.open || b.open,
    }
}

/// Merges an arbitrary collection of intervals into the canonical minimal
/// list: sorted, pairwise disjoint, non-adjacent. Adjacent intervals merge
/// only when their union is again an interval, so `[10,20)` and `(20,30]`
/// stay apart while `[10,20)` and `[20,30]` fuse.
pub fn union_normalize(mut ivs: Vec<Interval>) -> Vec<Interval> {
    ivs.sort_by_key(Interval::sort_key);
    let mut out: Vec<Interval> = Vec::with_capacity(ivs.len());
    for iv in ivs {
        if let Some(last) = out.last_mut() {
            if joinable(last, &iv) {
                let hi = looser_hi(last.hi, iv.hi);
                last.hi = hi;
                continue;
            }
        }
        out.push(iv);
    }
    out
}

fn looser_hi(a: Bound, b: Bound) -> Bound {
    match a.value.cmp(&b.value) {
        std::cmp::Ordering::Greater => a,
        std::cmp::Ordering::Less => b,
        std::cmp::Ordering::Equal => Bound::new(a.value, a.open && b.open),
    }
}

// `a` starts at or before `b`; can their union be a single interval?
fn joinable(a: &Interval, b: &Interval) -> bool {
    match a.hi.value.cmp(&b.lo.value) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => !a.hi.open || !b.lo.open,
    }
}

/// Complement of a pairwise disjoint collection within `(-inf, +inf)`.
/// Every finite endpoint flips its openness.
pub fn complement(ivs: &[Interval]) -> Vec<Interval> {
    let mut sorted = ivs.to_vec();
    sorted.sort_by_key(Interval::sort_key);
    let mut out = Vec::new();
    let mut cursor = Bound::neg_inf();
    for iv in &sorted {
        if let Some(gap) = Interval::new(cursor, Bound::new(iv.lo.value, !iv.lo.open)) {
            out.push(gap);
        }
        cursor = Bound::new(iv.hi.value, !iv.hi.open);
    }
    if let Some(tail) = Interval::new(cursor, Bound::pos_inf()) {
        out.push(tail);
    }
    out
}

/// True when every pair in the collection is disjoint.
pub fn pairwise_disjoint(ivs: &[Interval]) -> bool {
    for (k, a) in ivs.iter().enumerate() {
        for b in &ivs[k + 1..] {
            if a.intersect(b).is_some() {
                return false;
            }
        }
    }
    true
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open_lo = if self.lo.open { "(" } else { "[" };
        let open_hi = if self.hi.open { ")" } else { "]" };
        write!(f, "{}{},{}{}", open_lo, self.lo.value, self.hi.value, open_hi)
    }
}
