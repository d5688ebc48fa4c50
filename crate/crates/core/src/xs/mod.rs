//! Recognition of the words and finitely presented configurations that have
//! an infinite backward history of the firing squad avoiding `κ` and `γ`.
//!
//! Away from the periodic family, such a configuration is the image, some
//! finite number of steps later, of a configuration whose signals never met
//! in the past ([`forms::eventless`]). The recognizer pushes that regular
//! language forward with automata, for a number of steps that grows with the
//! word length. Periodic configurations are matched against the orbit
//! schemas of `ω(# B^n)ω`, and `∞γ` is accepted on its own.

pub mod forms;
mod schema;

pub use schema::{
    extract_relations, orbit_period_schemas, schema_matches_simulation, simulated_period, PeriodSchema, SchemaPhase,
    SignalLine, SIGNAL_LINES,
};

use std::fmt;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::alphabet::Sym;
use crate::config::{PeriodicConfig, PresentedConfig};
use crate::dfa::Dfa;
use crate::error::{Error, Result};
use crate::firing_squad::{backward_reach, fs_rule, BLANK, FIRING, KILLER, SHARP, SHARP_PRIME};
use crate::subshift::{count_words, for_each_word, Budget};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CaseLabel {
    OneSharp,
    TwoSharps,
    NeutralPrimes,
    PrimesWithSignals,
    NoSharps,
    AllGamma,
}

impl CaseLabel {
    pub const ALL: [CaseLabel; 6] = [
        CaseLabel::OneSharp,
        CaseLabel::TwoSharps,
        CaseLabel::NeutralPrimes,
        CaseLabel::PrimesWithSignals,
        CaseLabel::NoSharps,
        CaseLabel::AllGamma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseLabel::OneSharp => "ONE_SHARP",
            CaseLabel::TwoSharps => "TWO_SHARPS",
            CaseLabel::NeutralPrimes => "NEUTRAL_PRIMES",
            CaseLabel::PrimesWithSignals => "PRIMES_WITH_SIGNALS",
            CaseLabel::NoSharps => "NO_SHARPS",
            CaseLabel::AllGamma => "ALL_GAMMA",
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Steps of forward evolution needed for words of length `m`.
pub fn horizon(m: usize) -> usize {
    4 * m + 4
}

/// Largest spacing of the periodic family worth trying for words of length
/// `m`: beyond it every window sees the same blank gaps.
pub fn spacing_bound(m: usize) -> usize {
    6 * m + 10
}

struct Evolution {
    mask: Vec<bool>,
    steps: Vec<Arc<Dfa>>,
}

impl Evolution {
    fn new(start: Dfa, columns: bool) -> Evolution {
        let mask = forms::past_mask(columns);
        Evolution {
            steps: vec![Arc::new(start.restricted(&mask).minimized())],
            mask,
        }
    }

    fn upto(&mut self, s: usize, max_states: usize) -> Result<Arc<Dfa>> {
        while self.steps.len() <= s {
            let last = self.steps.last().expect("nonempty");
            let next = last.image(fs_rule(), max_states)?.restricted(&self.mask).minimized();
            self.steps.push(Arc::new(next));
        }
        Ok(self.steps[s].clone())
    }
}

struct Languages {
    no_sharps: Mutex<Evolution>,
    all: Mutex<Evolution>,
    neutral: Dfa,
    periodic: Mutex<HashMap<usize, Arc<HashMap<Vec<Sym>, CaseLabel>>>>,
}

fn languages() -> &'static Languages {
    static L: OnceLock<Languages> = OnceLock::new();
    L.get_or_init(|| Languages {
        no_sharps: Mutex::new(Evolution::new(forms::eventless(0, false), false)),
        all: Mutex::new(Evolution::new(forms::eventless(0, true), true)),
        neutral: forms::eventless(2, true).factors(usize::MAX).expect("small automaton"),
        periodic: Mutex::new(HashMap::new()),
    })
}

fn in_evolution(e: &Mutex<Evolution>, w: &[Sym], steps: usize, max_states: usize) -> Result<bool> {
    let d = e.lock().unwrap_or_else(|p| p.into_inner()).upto(steps, max_states)?;
    Ok(d.accepts(w))
}


/// Label of the orbit configuration with minimal period `period` (any
/// rotation), if it lies on the orbit of `ω(# B^m)ω`, `m = |period| - 1`,
/// before its first doubling.
fn periodic_family(period: &[Sym]) -> Option<CaseLabel> {
    let m = period.len() - 1;
    if m == 0 {
        return (period[0] == SHARP).then_some(CaseLabel::TwoSharps);
    }
    let alphabet = crate::firing_squad::fs_alphabet();
    let target = PeriodicConfig::new(alphabet.clone(), period.to_vec()).ok()?;
    for tau in 0..=m {
        let s = orbit_period_schemas(m, tau).ok()?;
        if !matches!(s.phase, SchemaPhase::Sharps | SchemaPhase::Signals) {
            break;
        }
        if PeriodicConfig::new(alphabet.clone(), s.word()).ok()? == target {
            return Some(if tau == 0 { CaseLabel::TwoSharps } else { CaseLabel::PrimesWithSignals });
        }
    }
    None
}

/// Length-`len` factors of the configurations on the orbits of `ω(# B^m)ω`,
/// `1 <= m <= spacing_bound(len)`, before `κ` or `γ` appears, each with the
/// label of the first configuration containing it.
fn periodic_factors(len: usize) -> HashMap<Vec<Sym>, CaseLabel> {
    let mut out: HashMap<Vec<Sym>, CaseLabel> = HashMap::new();
    for m in 1..=spacing_bound(len) {
        for tau in 0..=m {
            let Ok(s) = orbit_period_schemas(m, tau) else { continue };
            if !matches!(s.phase, SchemaPhase::Sharps | SchemaPhase::Signals) {
                break;
            }
            let label = if tau == 0 { CaseLabel::TwoSharps } else { CaseLabel::PrimesWithSignals };
            let p = s.word();
            for start in 0..p.len() {
                let f: Vec<Sym> = (0..len).map(|i| p[(start + i) % p.len()]).collect();
                let e = out.entry(f).or_insert(label);
                if label == CaseLabel::TwoSharps {
                    *e = label;
                }
            }
        }
    }
    out
}

/// Whether `w` is a factor of a configuration on the orbit of some
/// `ω(# B^m)ω` before `κ` or `γ` appears, and the label of the first such.
fn periodic_factor(w: &[Sym]) -> Option<CaseLabel> {
    if w.iter().all(|&s| s == SHARP) {
        return Some(CaseLabel::TwoSharps);
    }
    let table = {
        let mut cache = languages().periodic.lock().unwrap_or_else(|p| p.into_inner());
        cache.entry(w.len()).or_insert_with(|| Arc::new(periodic_factors(w.len()))).clone()
    };
    table.get(w).copied()
}

/// Membership of `w` in the language of histories, with the case it was
/// found in. `Ok(None)` rejects; errors only on exhausted budgets.
pub fn recognize_word(w: &[Sym]) -> Result<Option<CaseLabel>> {
    recognize_word_with(w, &Budget::from_env()?)
}

pub fn recognize_word_with(w: &[Sym], budget: &Budget) -> Result<Option<CaseLabel>> {
    let k = crate::firing_squad::FS_STATES.len();
    if w.iter().any(|s| s.index() >= k) {
        return Err(Error::UnknownSymbol("letter outside the firing squad alphabet".into()));
    }
    if w.is_empty() {
        return Ok(Some(CaseLabel::NoSharps));
    }
    if w.iter().all(|&s| s == FIRING) {
        return Ok(Some(CaseLabel::AllGamma));
    }
    if w.iter().any(|&s| s == KILLER || s == FIRING) {
        return Ok(None);
    }
    let l = languages();
    let columns = w.iter().any(|&s| s == SHARP || s == SHARP_PRIME);
    if !columns && in_evolution(&l.no_sharps, w, horizon(w.len()), budget.max_states)? {
        return Ok(Some(CaseLabel::NoSharps));
    }
    if l.neutral.accepts(w) {
        return Ok(Some(CaseLabel::NeutralPrimes));
    }
    if in_evolution(&l.all, w, horizon(w.len()), budget.max_states)? {
        return Ok(Some(CaseLabel::OneSharp));
    }
    Ok(periodic_factor(w))
}

/// Repetitions of each tail around the center when a configuration is
/// checked through one long word.
fn tail_copies(tail: usize, center: usize) -> usize {
    2.max((center + 8).div_ceil(tail))
}

/// Membership of a finitely presented configuration, with its case.
/// Periodic configurations with columns are matched against the orbits of
/// `ω(# B^n)ω`; otherwise the case follows from the number of columns and
/// the word `left^a center right^b` must be accepted, pushing the eventless
/// languages forward for a horizon set by the size of the presentation.
pub fn classify_config(c: &PresentedConfig) -> Result<Option<CaseLabel>> {
    classify_config_with(c, &Budget::from_env()?)
}

pub fn classify_config_with(c: &PresentedConfig, budget: &Budget) -> Result<Option<CaseLabel>> {
    if c.alphabet != crate::firing_squad::fs_alphabet() {
        return Err(Error::AlphabetMismatch("configuration is not over the firing squad alphabet".into()));
    }
    if c.contains(KILLER) {
        return Ok(None);
    }
    if c.is_uniform(FIRING) {
        return Ok(Some(CaseLabel::AllGamma));
    }
    if c.contains(FIRING) {
        return Ok(None);
    }
    let is_column = |s: &Sym| *s == SHARP || *s == SHARP_PRIME;
    if let Some(p) = c.as_periodic() {
        if p.period().iter().any(is_column) {
            if let Some(label) = periodic_family(p.period()) {
                return Ok(Some(label));
            }
            let bare = p.period().iter().all(|s| *s == BLANK || *s == SHARP_PRIME);
            return Ok(bare.then_some(CaseLabel::NeutralPrimes));
        }
    }
    let tails = c.left.iter().chain(&c.right).any(is_column);
    let columns = c.center.iter().filter(|s| is_column(s)).count() + if tails { 2 } else { 0 };
    let a = tail_copies(c.left.len(), c.center.len());
    let b = tail_copies(c.right.len(), c.center.len());
    let mut w: Vec<Sym> = Vec::new();
    for _ in 0..a {
        w.extend_from_slice(&c.left);
    }
    w.extend_from_slice(&c.center);
    for _ in 0..b {
        w.extend_from_slice(&c.right);
    }
    let l = languages();
    let steps = horizon(c.left.len() + c.center.len() + c.right.len());
    Ok(match columns {
        0 => in_evolution(&l.no_sharps, &w, steps, budget.max_states)?.then_some(CaseLabel::NoSharps),
        1 => in_evolution(&l.all, &w, steps, budget.max_states)?.then_some(CaseLabel::OneSharp),
        _ => l.neutral.accepts(&w).then_some(CaseLabel::NeutralPrimes),
    })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Category {
    /// Both accept.
    Accepted,
    /// Both reject.
    Refuted,
    /// Only the oracle accepts; it over-approximates at finite depth.
    Undecided,
    /// Only the oracle accepts, and the word contains `κ`.
    UndecidedKappa,
    /// Only the oracle accepts, and the word mixes `γ` with other letters.
    UndecidedGamma,
    /// The recognizer accepts a word the oracle refutes.
    Unsound,
}

impl Category {
    pub fn name(self) -> &'static str {
        match self {
            Category::Accepted => "accepted",
            Category::Refuted => "refuted",
            Category::Undecided => "undecided",
            Category::UndecidedKappa => "undecided-kappa",
            Category::UndecidedGamma => "undecided-gamma",
            Category::Unsound => "unsound",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckLine {
    pub word: Vec<Sym>,
    pub label: Option<CaseLabel>,
    pub oracle: bool,
    pub category: Category,
}

#[derive(Clone, Debug)]
pub struct CrossCheck {
    pub max_len: usize,
    pub depth: usize,
    /// Every `stride`-th word of each length was checked.
    pub stride: usize,
    pub lines: Vec<CheckLine>,
}

impl CrossCheck {
    pub fn count(&self, c: Category) -> usize {
        self.lines.iter().filter(|l| l.category == c).count()
    }

    pub fn unsound(&self) -> impl Iterator<Item = &CheckLine> {
        self.lines.iter().filter(|l| l.category == Category::Unsound)
    }

    pub fn is_sound(&self) -> bool {
        self.count(Category::Unsound) == 0
    }

    /// Summary as `key=value` lines.
    pub fn summary(&self) -> String {
        let mut s = format!("max_len={}\ndepth={}\nstride={}\nwords={}\n", self.max_len, self.depth, self.stride, self.lines.len());
        for c in [
            Category::Accepted,
            Category::Refuted,
            Category::Undecided,
            Category::UndecidedKappa,
            Category::UndecidedGamma,
            Category::Unsound,
        ] {
            s.push_str(&format!("{}={}\n", c.name(), self.count(c)));
        }
        s
    }

    /// One line per word: word, recognizer verdict, oracle verdict, category.
    pub fn to_text(&self) -> String {
        let a = crate::firing_squad::fs_alphabet();
        let mut s = self.summary();
        for l in &self.lines {
            let rec = l.label.map_or("reject", |c| c.name());
            let oracle = if l.oracle { "reach" } else { "refute" };
            s.push_str(&format!("{} {rec} {oracle} {}\n", a.format_word(&l.word), l.category.name()));
        }
        s
    }
}

/// Compares [`recognize_word`] with [`backward_reach`] at `depth` on every
/// word of length `1..=max_len`, or on every `stride`-th word of each length
/// (in index order) when there are more than the enumeration budget allows.
pub fn cross_check(max_len: usize, depth: usize, budget: &Budget) -> Result<CrossCheck> {
    let k = crate::firing_squad::FS_STATES.len();
    let total: u128 = (1..=max_len).map(|m| count_words(k, m)).sum();
    let stride = total.div_ceil(budget.max_enumeration.max(1)).max(1);
    if stride > u64::MAX as u128 {
        return Err(Error::BudgetExceeded {
            what: "cross-check words",
            needed: total,
            limit: budget.max_enumeration,
        });
    }
    let stride = stride as u64;
    let mut words: Vec<Vec<Sym>> = Vec::new();
    for m in 1..=max_len {
        let mut i = 0u64;
        for_each_word(k, m, &[], |w| {
            if i % stride == 0 {
                words.push(w.to_vec());
            }
            i += 1;
        });
    }
    let lines = words
        .into_par_iter()
        .map(|word| {
            let label = recognize_word_with(&word, budget)?;
            let oracle = backward_reach(&word, depth)?;
            let category = match (label.is_some(), oracle) {
                (true, true) => Category::Accepted,
                (false, false) => Category::Refuted,
                (true, false) => Category::Unsound,
                (false, true) if word.contains(&KILLER) => Category::UndecidedKappa,
                (false, true) if word.contains(&FIRING) => Category::UndecidedGamma,
                (false, true) => Category::Undecided,
            };
            Ok(CheckLine {
                word,
                label,
                oracle,
                category,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CrossCheck {
        max_len,
        depth,
        stride: stride as usize,
        lines,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_names() {
        let names: Vec<&str> = CaseLabel::ALL.iter().map(|l| l.name()).collect();
        assert_eq!(names, ["ONE_SHARP", "TWO_SHARPS", "NEUTRAL_PRIMES", "PRIMES_WITH_SIGNALS", "NO_SHARPS", "ALL_GAMMA"]);
        assert_eq!(CaseLabel::TwoSharps.to_string(), "TWO_SHARPS");
    }

    #[test]
    fn bounds_grow_with_length() {
        assert_eq!(horizon(1), 8);
        assert_eq!(spacing_bound(3), 28);
    }

    #[test]
    fn periodic_factors_contain_sharp_windows() {
        let f = periodic_factors(3);
        assert_eq!(f.get(&vec![SHARP, BLANK, SHARP]), Some(&CaseLabel::TwoSharps));
        assert!(!f.contains_key(&vec![SHARP, SHARP, BLANK]));
    }

    #[test]
    fn category_names() {
        assert_eq!(Category::UndecidedKappa.name(), "undecided-kappa");
        assert_eq!(Category::Unsound.name(), "unsound");
    }
}
