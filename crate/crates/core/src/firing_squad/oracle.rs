use crate::alphabet::Sym;
use crate::dfa::Dfa;
use crate::error::Result;
use crate::firing_squad::{fs_rule, FIRING, KILLER};

/// Default state bound for the preimage automata.
pub const DEFAULT_MAX_STATES: usize = 50_000;

/// Letters allowed in the past of a history: everything but `κ` and `γ`.
pub fn live_mask() -> Vec<bool> {
    let k = fs_rule().alphabet().len();
    (0..k).map(|i| Sym(i as u16) != KILLER && Sym(i as u16) != FIRING).collect()
}

/// Automaton of the words `u_T` of length `|w| + 2T` that start a chain
/// `u_T -> ... -> u_0 = w` of block-map steps with `u_1..u_T` free of `κ`
/// and `γ`.
pub fn backward_automaton(w: &[Sym], depth: usize, max_states: usize) -> Result<Dfa> {
    let rule = fs_rule();
    let mask = live_mask();
    let mut d = Dfa::from_words(rule.alphabet().len(), [w]);
    for _ in 0..depth {
        d = d.preimage(rule, max_states)?.restricted(&mask).minimized();
        if d.is_empty() {
            break;
        }
    }
    Ok(d)
}

/// Whether `w` has a `κ`/`γ`-free backward history of depth `depth`.
pub fn backward_reach(w: &[Sym], depth: usize) -> Result<bool> {
    backward_reach_with(w, depth, DEFAULT_MAX_STATES)
}

pub fn backward_reach_with(w: &[Sym], depth: usize, max_states: usize) -> Result<bool> {
    Ok(!backward_automaton(w, depth, max_states)?.is_empty())
}
