use std::fmt;

use crate::alphabet::Sym;
use crate::error::{Error, Result};
use crate::firing_squad::{fs_rule, FIRING, KILLER};
use crate::rule::Rule;

use super::sim::Orbit;

/// A finite window of a history: `rows[0]` is the most recent configuration,
/// `rows[t]` the one `t` steps earlier. Edge cells are unconstrained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HistoryDiagram {
    pub rows: Vec<Vec<Sym>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    ForbiddenSymbol { cell: usize, time: usize },
    RuleMismatch { cell: usize, time: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ForbiddenSymbol { cell, time } => write!(f, "forbidden symbol at cell {cell}, time {time}"),
            Violation::RuleMismatch { cell, time } => write!(f, "local rule mismatch at cell {cell}, time {time}"),
        }
    }
}

impl HistoryDiagram {
    pub fn new(rows: Vec<Vec<Sym>>) -> Result<HistoryDiagram> {
        let w = rows.first().map_or(0, Vec::len);
        if w == 0 || rows.iter().any(|r| r.len() != w) {
            return Err(Error::Precondition("history rows must be nonempty and of equal width".into()));
        }
        Ok(HistoryDiagram { rows })
    }

    /// Cells `[from, to)` of an orbit, reversed so the last step comes first.
    pub fn from_orbit(orbit: &Orbit, from: i64, to: i64) -> Result<HistoryDiagram> {
        HistoryDiagram::new(orbit.configs.iter().rev().map(|c| c.window(from, to)).collect())
    }

    pub fn width(&self) -> usize {
        self.rows[0].len()
    }

    pub fn depth(&self) -> usize {
        self.rows.len()
    }

    /// Violations with respect to the firing squad.
    pub fn violations(&self) -> Vec<Violation> {
        self.violations_for(fs_rule(), &[KILLER, FIRING])
    }

    /// Violations of `rows[t-1] = rule(rows[t])` on interior cells, and of the
    /// `forbidden` symbols at times `>= 1`.
    pub fn violations_for(&self, rule: &Rule, forbidden: &[Sym]) -> Vec<Violation> {
        let r = rule.radius();
        let w = self.width();
        let mut out = Vec::new();
        for t in 1..self.depth() {
            for (cell, s) in self.rows[t].iter().enumerate() {
                if forbidden.contains(s) {
                    out.push(Violation::ForbiddenSymbol { cell, time: t });
                }
            }
            if w > 2 * r {
                for cell in r..w - r {
                    if rule.apply(&self.rows[t][cell - r..=cell + r]) != self.rows[t - 1][cell] {
                        out.push(Violation::RuleMismatch { cell, time: t - 1 });
                    }
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }
}

/// Checks a firing squad history and lists what is wrong with it.
pub fn validate_history(d: &HistoryDiagram) -> (bool, Vec<Violation>) {
    let v = d.violations();
    (v.is_empty(), v)
}
