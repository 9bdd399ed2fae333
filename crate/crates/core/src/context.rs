//! Context hierarchy.
//!
//! Contexts form a tree rooted at W0. Each context owns a label; an
//! assertion made in a context carries that label (assertions at W0 carry
//! none) and holds in the context and all of its successors. Sibling
//! contexts partition their parent, so their labels are mutually exclusive.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::label::{LabelId, W0};

#[derive(Debug, Clone)]
struct CtxNode {
    label: LabelId,
    parent: Option<usize>,
    children: Vec<usize>,
    valid: bool,
}

#[derive(Debug, Clone)]
pub struct ContextTree {
    nodes: Vec<CtxNode>,
    by_label: BTreeMap<LabelId, usize>,
}

impl ContextTree {
    pub fn new() -> ContextTree {
        ContextTree {
            nodes: vec![CtxNode { label: W0, parent: None, children: Vec::new(), valid: true }],
            by_label: BTreeMap::from([(W0, 0)]),
        }
    }

    fn index(&self, label: LabelId) -> Result<usize> {
        self.by_label
            .get(&label)
            .copied()
            .ok_or_else(|| Error::UnknownContext(format!("label #{label}")))
    }

    pub fn contains(&self, label: LabelId) -> bool {
        self.by_label.contains_key(&label)
    }

    pub fn add_child(&mut self, parent: LabelId, child: LabelId) -> Result<()> {
        let p = self.index(parent)?;
        let idx = self.nodes.len();
        self.nodes.push(CtxNode { label: child, parent: Some(p), children: Vec::new(), valid: true });
        self.nodes[p].children.push(idx);
        self.by_label.insert(child, idx);
        Ok(())
    }

    pub fn parent(&self, label: LabelId) -> Result<Option<LabelId>> {
        let idx = self.index(label)?;
        Ok(self.nodes[idx].parent.map(|p| self.nodes[p].label))
    }

    pub fn children(&self, label: LabelId) -> Result<Vec<LabelId>> {
        let idx = self.index(label)?;
        Ok(self.nodes[idx].children.iter().map(|&c| self.nodes[c].label).collect())
    }

    /// The label and its ancestors, ending at W0.
    pub fn chain(&self, label: LabelId) -> Result<Vec<LabelId>> {
        let mut idx = self.index(label)?;
        let mut out = vec![self.nodes[idx].label];
        while let Some(p) = self.nodes[idx].parent {
            out.push(self.nodes[p].label);
            idx = p;
        }
        Ok(out)
    }

    /// True when `anc` is `label` itself or one of its ancestors.
    pub fn is_ancestor_or_self(&self, anc: LabelId, label: LabelId) -> Result<bool> {
        Ok(self.chain(label)?.contains(&anc))
    }

    pub fn is_valid(&self, label: LabelId) -> Result<bool> {
        let idx = self.index(label)?;
        Ok(self.nodes[idx].valid)
    }

    pub fn set_invalid(&mut self, label: LabelId) -> Result<()> {
        let idx = self.index(label)?;
        self.nodes[idx].valid = false;
        Ok(())
    }

    /// Every context label in the tree, preorder from W0.
    pub fn labels(&self) -> Vec<LabelId> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![0usize];
        while let Some(idx) = stack.pop() {
            out.push(self.nodes[idx].label);
            for &c in self.nodes[idx].children.iter().rev() {
                stack.push(c);
            }
        }
        out
    }

    /// Labels of the subtree rooted at `label`, preorder.
    pub fn subtree(&self, label: LabelId) -> Result<Vec<LabelId>> {
        let root = self.index(label)?;
        let mut out = Vec::new();
        let mut stack = vec![root];
        while let Some(idx) = stack.pop() {
            out.push(self.nodes[idx].label);
            for &c in self.nodes[idx].children.iter().rev() {
                stack.push(c);
            }
        }
        Ok(out)
    }
}

impl Default for ContextTree {
    fn default() -> ContextTree {
        ContextTree::new()
    }
}
