use crate::config::PresentedConfig;
use crate::error::Result;
use crate::firing_squad::{fs_rule, FIRING, KILLER};
use crate::rule::Rule;

/// An orbit together with the first times `κ` and `γ` were seen.
#[derive(Clone, Debug)]
pub struct Orbit {
    pub configs: Vec<PresentedConfig>,
    pub first_killer: Option<usize>,
    pub first_firing: Option<usize>,
}

impl Orbit {
    pub fn steps(&self) -> usize {
        self.configs.len() - 1
    }
}

/// Runs `rule` for `steps` steps from `c`, recording events for the firing
/// squad symbols when the alphabet is the squad's.
pub fn simulate_with(rule: &Rule, c: &PresentedConfig, steps: usize) -> Result<Orbit> {
    let watch = rule.alphabet() == fs_rule().alphabet();
    let mut configs = vec![c.compact()];
    let mut first_killer = None;
    let mut first_firing = None;
    for t in 0..=steps {
        if t > 0 {
            let next = configs[t - 1].apply(rule)?.compact();
            configs.push(next);
        }
        if watch {
            let cur = &configs[t];
            if first_killer.is_none() && cur.contains(KILLER) {
                first_killer = Some(t);
            }
            if first_firing.is_none() && cur.contains(FIRING) {
                first_firing = Some(t);
            }
        }
    }
    Ok(Orbit {
        configs,
        first_killer,
        first_firing,
    })
}

/// Runs the firing squad.
pub fn simulate(c: &PresentedConfig, steps: usize) -> Result<Orbit> {
    simulate_with(fs_rule(), c, steps)
}

/// `ω(# B^n)ω`.
pub fn sharp_config(n: usize) -> PresentedConfig {
    let mut p = vec![crate::firing_squad::SHARP];
    p.extend(std::iter::repeat_n(crate::firing_squad::BLANK, n));
    PresentedConfig::periodic(fs_rule().alphabet().clone(), p).expect("fs config")
}

/// Spacing whose orbit passes through `ω(# B^n)ω`: the # points of
/// `ω(# B^(2n+1))ω` spawn new ones at their midpoints.
pub fn spacing_successor(n: usize) -> usize {
    2 * n + 1
}

/// Steps from `ω(# B^(2n+1))ω` to `ω(# B^n)ω`.
pub fn doubling_time(n: usize) -> usize {
    2 * n + 2
}

/// The spacings `2^j - 1` for `j <= max_j`, the ones that fire.
pub fn spacing_set(max_j: u32) -> Vec<usize> {
    (0..=max_j).map(|j| (1usize << j) - 1).collect()
}

/// Firing time of `ω(# B^n)ω` for `n` in the spacing set.
pub fn firing_time(n: usize) -> usize {
    2 * n + 1
}

/// One configuration of the chain `ω(# B^n_j)ω` leading to `∞γ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainLink {
    pub time: usize,
    pub spacing: usize,
}

/// Runs `ω(# B^(2^j - 1))ω` forward and checks that it passes through every
/// smaller spacing of the set at the predicted times, then fires, with no
/// `κ` or `γ` before. Returns the links, ending with `ω(#)ω`, or `None`.
pub fn doubling_chain(j: u32) -> Result<Option<Vec<ChainLink>>> {
    let n = (1usize << j) - 1;
    let fire = firing_time(n);
    let orbit = simulate(&sharp_config(n), fire)?;
    if orbit.first_killer.is_some() || orbit.first_firing != Some(fire) {
        return Ok(None);
    }
    if !orbit.configs[fire].is_uniform(FIRING) {
        return Ok(None);
    }
    let mut links = Vec::new();
    let mut time = 0;
    let mut m = n;
    loop {
        let want = sharp_config(m).as_periodic();
        if orbit.configs[time].as_periodic() != want {
            return Ok(None);
        }
        links.push(ChainLink { time, spacing: m });
        if m == 0 {
            break;
        }
        m = (m - 1) / 2;
        time += doubling_time(m);
    }
    Ok(Some(links))
}

/// How the orbit of `ω(# B^n)ω` ends within `steps` steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiringOutcome {
    pub first_firing: Option<usize>,
    pub first_killer: Option<usize>,
    /// The first configuration containing `γ` is `∞γ`.
    pub synchronous: bool,
}

pub fn firing_outcome(n: usize, steps: usize) -> Result<FiringOutcome> {
    let orbit = simulate(&sharp_config(n), steps)?;
    let synchronous = orbit.first_firing.is_some_and(|t| orbit.configs[t].is_uniform(FIRING));
    Ok(FiringOutcome {
        first_firing: orbit.first_firing,
        first_killer: orbit.first_killer,
        synchronous,
    })
}
