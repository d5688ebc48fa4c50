//! Languages attached to a rule: column factors and their 2-approximation,
//! finite-time images and the limit-set chain, factor maps, and the words
//! predicted for the squad-frozen extension.

mod factor;
mod language;
mod trace;

pub use factor::{apply_factor_language, predicted_limit_words, FactorMap};
pub use language::{image_language, image_language_with, limit_language, LanguageSample, LimitReport, Strategy};
pub use trace::{
    check_sft_order2, trace_prefixes, trace_prefixes_enumerated, two_approx, ColumnWord, SftReport, TwoApproxGraph,
};

use crate::error::{Error, Result};

/// Explicit resource bounds. Exceeding one is reported as
/// [`Error::BudgetExceeded`], never silently truncated.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of words enumerated (or dynamic-programming states kept).
    pub max_enumeration: u128,
    /// Maximum number of automaton states.
    pub max_states: usize,
}

pub const BUDGET_ENV: &str = "CA_BUDGET_CELLS";

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_enumeration: 1 << 26,
            max_states: 50_000,
        }
    }
}

impl Budget {
    /// Default budget with `max_enumeration` taken from `CA_BUDGET_CELLS` if set.
    pub fn from_env() -> Result<Budget> {
        let mut b = Budget::default();
        if let Ok(v) = std::env::var(BUDGET_ENV) {
            b.max_enumeration = v
                .trim()
                .parse()
                .map_err(|_| Error::Precondition(format!("{BUDGET_ENV} must be a positive integer, got `{v}`")))?;
            if b.max_enumeration == 0 {
                return Err(Error::Precondition(format!("{BUDGET_ENV} must be positive")));
            }
        }
        Ok(b)
    }

    pub(crate) fn check_enumeration(&self, what: &'static str, needed: u128) -> Result<()> {
        if needed > self.max_enumeration {
            return Err(Error::BudgetExceeded {
                what,
                needed,
                limit: self.max_enumeration,
            });
        }
        Ok(())
    }
}

/// `k^len`, saturating.
pub fn count_words(k: usize, len: usize) -> u128 {
    (k as u128).checked_pow(len as u32).unwrap_or(u128::MAX)
}

/// Calls `f` on every word of length `len` over `0..k` whose first letters
/// are `prefix`, in lexicographic order.
pub fn for_each_word(k: usize, len: usize, prefix: &[crate::Sym], mut f: impl FnMut(&[crate::Sym])) {
    use crate::Sym;
    let mut w: Vec<Sym> = prefix.to_vec();
    w.resize(len, Sym(0));
    if prefix.len() >= len {
        f(&w[..len]);
        return;
    }
    loop {
        f(&w);
        let mut i = len;
        loop {
            if i == prefix.len() {
                return;
            }
            i -= 1;
            w[i].0 += 1;
            if w[i].index() < k {
                break;
            }
            w[i].0 = 0;
        }
    }
}
