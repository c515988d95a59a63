use std::collections::BTreeMap;

use crate::code::{Code, Response};

/// A fixed strategy: the guess to ask at this point and the continuation for
/// every response. The solved response never has a child.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyTree {
    pub guess: Code,
    pub children: BTreeMap<Response, StrategyTree>,
}

impl StrategyTree {
    pub fn leaf(guess: Code) -> Self {
        StrategyTree {
            guess,
            children: BTreeMap::new(),
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn child(&self, response: Response) -> Option<&StrategyTree> {
        self.children.get(&response)
    }

    /// Number of nodes, this one included.
    pub fn node_count(&self) -> usize {
        1 + self.children.values().map(|c| c.node_count()).sum::<usize>()
    }

    /// Longest root-to-leaf path counted in guesses.
    pub fn depth(&self) -> usize {
        1 + self.children.values().map(|c| c.depth()).max().unwrap_or(0)
    }
}
