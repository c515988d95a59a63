//! Playing a strategy against a responder turn by turn.

use thiserror::Error;

use crate::code::{naive_product, Code, GameParams, Response};
use crate::game::enumerate_codes;
use crate::strategy::StrategyTree;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SessionError {
    #[error("turn {turn}: no secret is consistent with the responses so far")]
    Inconsistent { turn: usize },
    #[error("turn {turn}: '{response}' cannot occur with {positions} positions")]
    Impossible {
        turn: usize,
        response: Response,
        positions: usize,
    },
    #[error("turn {turn}: the strategy has no move after {response}")]
    NoContinuation { turn: usize, response: Response },
    #[error("the game is already over")]
    Finished,
}

/// What happens after a response.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    /// The next guess.
    Guess(Code),
    /// Solved after this many guesses.
    Solved(usize),
}

/// A game in progress: the engine guesses from `tree`, the caller answers.
#[derive(Debug, Clone)]
pub struct Session<'t> {
    params: GameParams,
    node: &'t StrategyTree,
    candidates: Vec<Code>,
    transcript: Vec<(Code, Response)>,
    solved: bool,
}

impl<'t> Session<'t> {
    pub fn new(tree: &'t StrategyTree, params: GameParams) -> Self {
        Session {
            params,
            node: tree,
            candidates: enumerate_codes(params),
            transcript: Vec::new(),
            solved: false,
        }
    }

    /// The guess awaiting a response.
    pub fn guess(&self) -> Option<Code> {
        (!self.solved).then_some(self.node.guess)
    }

    pub fn transcript(&self) -> &[(Code, Response)] {
        &self.transcript
    }

    /// Secrets still consistent with every response.
    pub fn candidates(&self) -> &[Code] {
        &self.candidates
    }

    pub fn is_solved(&self) -> bool {
        self.solved
    }

    /// Records the response to the current guess. Errors leave the session
    /// unchanged.
    pub fn respond(&mut self, response: Response) -> Result<Step, SessionError> {
        if self.solved {
            return Err(SessionError::Finished);
        }
        let turn = self.transcript.len() + 1;
        let positions = self.params.positions();
        if !response.is_possible(positions) {
            return Err(SessionError::Impossible {
                turn,
                response,
                positions,
            });
        }
        let guess = self.node.guess;
        let remaining: Vec<Code> = self
            .candidates
            .iter()
            .copied()
            .filter(|&s| naive_product(guess, s) == response)
            .collect();
        if remaining.is_empty() {
            return Err(SessionError::Inconsistent { turn });
        }
        if response.is_solved(positions) {
            self.transcript.push((guess, response));
            self.candidates = remaining;
            self.solved = true;
            return Ok(Step::Solved(turn));
        }
        let next = self
            .node
            .child(response)
            .ok_or(SessionError::NoContinuation { turn, response })?;
        self.transcript.push((guess, response));
        self.candidates = remaining;
        self.node = next;
        Ok(Step::Guess(next.guess))
    }
}
