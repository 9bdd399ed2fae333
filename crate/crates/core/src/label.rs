//! Labels and label sets.
//!
//! Every elemental constraint carries a set of labels recording which input
//! disjuncts and contexts it depends on. Label sets are small dense bitsets;
//! ids are minted once per session and never reused, so a set is a plain
//! word vector.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

pub type LabelId = u32;

/// The common context: the label of every singleton input disjunct.
pub const R0: LabelId = 0;
/// The root context.
pub const W0: LabelId = 1;

const WORD: usize = 64;

/// A set of label ids. Invariant: no trailing zero words, so derived
/// equality and hashing are canonical.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelSet {
    words: Vec<u64>,
}

impl LabelSet {
    pub fn new() -> LabelSet {
        LabelSet::default()
    }

    pub fn from_iter<I: IntoIterator<Item = LabelId>>(ids: I) -> LabelSet {
        let mut s = LabelSet::new();
        for id in ids {
            s.insert(id);
        }
        s
    }

    pub fn singleton(id: LabelId) -> LabelSet {
        LabelSet::from_iter([id])
    }

    pub fn insert(&mut self, id: LabelId) {
        let w = id as usize / WORD;
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1 << (id as usize % WORD);
    }

    pub fn remove(&mut self, id: LabelId) {
        let w = id as usize / WORD;
        if w < self.words.len() {
            self.words[w] &= !(1 << (id as usize % WORD));
            while self.words.last() == Some(&0) {
                self.words.pop();
            }
        }
    }

    pub fn contains(&self, id: LabelId) -> bool {
        let w = id as usize / WORD;
        w < self.words.len() && self.words[w] & (1 << (id as usize % WORD)) != 0
    }

    pub fn union(&self, other: &LabelSet) -> LabelSet {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = long.words.clone();
        for (w, v) in short.words.iter().enumerate() {
            words[w] |= v;
        }
        LabelSet { words }
    }

    pub fn is_subset(&self, other: &LabelSet) -> bool {
        if self.words.len() > other.words.len() {
            return false;
        }
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &LabelSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn intersection(&self, other: &LabelSet) -> LabelSet {
        let mut words: Vec<u64> =
            self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        while words.last() == Some(&0) {
            words.pop();
        }
        LabelSet { words }
    }

    pub fn difference(&self, other: &LabelSet) -> LabelSet {
        let mut words = self.words.clone();
        for (w, v) in other.words.iter().enumerate().take(words.len()) {
            words[w] &= !v;
        }
        while words.last() == Some(&0) {
            words.pop();
        }
        LabelSet { words }
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = LabelId> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            (0..WORD).filter(move |b| w & (1 << b) != 0).map(move |b| (wi * WORD + b) as LabelId)
        })
    }
}

impl FromIterator<LabelId> for LabelSet {
    fn from_iter<I: IntoIterator<Item = LabelId>>(ids: I) -> LabelSet {
        LabelSet::from_iter(ids)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelKind {
    /// Label of one disjunct of an input constraint (or the common R0).
    Disjunct,
    /// Label of a context node.
    Context,
}

#[derive(Debug, Clone)]
struct LabelInfo {
    kind: LabelKind,
    /// Display name: user-chosen where given, otherwise "R<n>" / "W<n>".
    name: String,
    /// Index into the sibling-group table for multi-disjunct inputs.
    group: Option<usize>,
}

/// Restore point capturing how many labels and groups existed before a
/// tentative assertion started minting.
#[derive(Debug, Clone, Copy)]
pub struct LabelsMark {
    infos: usize,
    groups: usize,
    minted: u32,
}

/// Session-wide label registry: kinds, display names and the sibling groups
/// of multi-disjunct input constraints.
#[derive(Debug, Clone)]
pub struct Labels {
    infos: Vec<LabelInfo>,
    by_name: BTreeMap<String, LabelId>,
    groups: Vec<Vec<LabelId>>,
    minted_disjuncts: u32,
}

impl Labels {
    pub fn new() -> Labels {
        let mut l = Labels {
            infos: Vec::new(),
            by_name: BTreeMap::new(),
            groups: Vec::new(),
            minted_disjuncts: 0,
        };
        l.push(LabelKind::Disjunct, "R0".to_owned(), None);
        l.push(LabelKind::Context, "W0".to_owned(), None);
        l
    }

    fn push(&mut self, kind: LabelKind, name: String, group: Option<usize>) -> LabelId {
        let id = self.infos.len() as LabelId;
        self.by_name.insert(name.clone(), id);
        self.infos.push(LabelInfo { kind, name, group });
        id
    }

    /// Mints one disjunct label. `name` falls back to the next "R<n>".
    pub fn mint_disjunct(&mut self, name: Option<String>) -> Result<LabelId> {
        self.minted_disjuncts += 1;
        let name = match name {
            Some(n) => n,
            None => format!("R{}", self.minted_disjuncts),
        };
        if self.by_name.contains_key(&name) {
            return Err(Error::DuplicateName(name));
        }
        Ok(self.push(LabelKind::Disjunct, name, None))
    }

    pub fn mint_context(&mut self, name: String) -> Result<LabelId> {
        if self.by_name.contains_key(&name) {
            return Err(Error::DuplicateName(name));
        }
        Ok(self.push(LabelKind::Context, name, None))
    }

    /// Registers `members` as the complete sibling group of one input
    /// constraint. Only groups of two or more take part in merging.
    pub fn register_group(&mut self, members: Vec<LabelId>) {
        if members.len() < 2 {
            return;
        }
        let idx = self.groups.len();
        for &m in &members {
            self.infos[m as usize].group = Some(idx);
        }
        self.groups.push(members);
    }

    /// Snapshot for rolling back labels minted by a rejected assertion.
    pub fn mark(&self) -> LabelsMark {
        LabelsMark {
            infos: self.infos.len(),
            groups: self.groups.len(),
            minted: self.minted_disjuncts,
        }
    }

    pub fn rollback(&mut self, mark: LabelsMark) {
        for info in &self.infos[mark.infos..] {
            self.by_name.remove(&info.name);
        }
        self.infos.truncate(mark.infos);
        self.groups.truncate(mark.groups);
        self.minted_disjuncts = mark.minted;
    }

    pub fn group_of(&self, id: LabelId) -> Option<&[LabelId]> {
        self.infos
            .get(id as usize)
            .and_then(|i| i.group)
            .map(|g| self.groups[g].as_slice())
    }

    pub fn group_index(&self, id: LabelId) -> Option<usize> {
        self.infos.get(id as usize).and_then(|i| i.group)
    }

    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    pub fn group_members(&self, idx: usize) -> &[LabelId] {
        &self.groups[idx]
    }

    pub fn kind(&self, id: LabelId) -> LabelKind {
        self.infos[id as usize].kind
    }

    pub fn name(&self, id: LabelId) -> &str {
        &self.infos[id as usize].name
    }

    pub fn lookup(&self, name: &str) -> Option<LabelId> {
        self.by_name.get(name).copied()
    }

    pub fn count(&self) -> usize {
        self.infos.len()
    }

    pub fn is_context(&self, id: LabelId) -> bool {
        self.kind(id) == LabelKind::Context
    }

    /// Renders a set like `{R1,R4,R0}`: minted order, R0 last, contexts after.
    pub fn render_set(&self, set: &LabelSet) -> String {
        let mut disj: Vec<LabelId> = Vec::new();
        let mut ctxs: Vec<LabelId> = Vec::new();
        let mut has_r0 = false;
        for id in set.iter() {
            if id == R0 {
                has_r0 = true;
            } else if self.is_context(id) {
                ctxs.push(id);
            } else {
                disj.push(id);
            }
        }
        let mut parts: Vec<&str> = disj.iter().map(|&id| self.name(id)).collect();
        if has_r0 {
            parts.push("R0");
        }
        parts.extend(ctxs.iter().map(|&id| self.name(id)));
        format!("{{{}}}", parts.join(","))
    }
}

impl Default for Labels {
    fn default() -> Labels {
        Labels::new()
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, id) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{id}")?;
        }
        write!(f, "}}")
    }
}
