//! Verification suites: each runs a family of exact checks and reports one
//! assertion per check.

use std::fmt;

use serde::Serialize;

use crate::alphabet::Sym;
use crate::constructions::{add_spreading, build_delta, build_tilde, tilde_embedding, DeltaSpec};
use crate::error::{Error, Result};
use crate::firing_squad::{
    backward_reach, firing_outcome, firing_time, fs_rule, sharp_config, simulate, spacing_set, FIRING, KILLER,
};
use crate::rule::{check_sub_automaton, product_rule, Rule};
use crate::subshift::{
    apply_factor_language, for_each_word, image_language, image_language_with, predicted_limit_words, Budget,
    FactorMap, Strategy,
};
use crate::xs::{
    classify_config_with, cross_check, extract_relations, orbit_period_schemas, recognize_word_with,
    schema_matches_simulation, CaseLabel, SIGNAL_LINES,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Assertion {
    pub name: String,
    /// The property the check instantiates.
    pub claim: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub suite: String,
    pub assertions: Vec<Assertion>,
}

impl Report {
    fn new(suite: &str) -> Report {
        Report {
            suite: suite.to_string(),
            assertions: Vec::new(),
        }
    }

    fn check(&mut self, name: impl Into<String>, claim: &'static str, pass: bool, detail: impl Into<String>) {
        self.assertions.push(Assertion {
            name: name.into(),
            claim,
            pass,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Assertion> {
        self.assertions.iter().filter(|a| !a.pass)
    }

    /// `key=value` lines: one per assertion, then the totals.
    pub fn to_text(&self) -> String {
        let mut s = format!("suite={}\n", self.suite);
        for a in &self.assertions {
            let status = if a.pass { "PASS" } else { "FAIL" };
            s.push_str(&format!("assertion={} status={status} claim=\"{}\"", a.name, a.claim));
            if !a.detail.is_empty() {
                s.push(' ');
                s.push_str(&a.detail);
            }
            s.push('\n');
        }
        let failed = self.failures().count();
        s.push_str(&format!(
            "passed={} failed={failed}\nresult={}\n",
            self.assertions.len() - failed,
            if failed == 0 { "PASS" } else { "FAIL" }
        ));
        s
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub const SUITES: [&str; 5] = ["tilde-sft2", "delta-limfs", "limsim", "fs-contract", "xs-crosscheck"];

/// Column factors of `tilde(base)` are SFTs of order 2, for every width in
/// `widths` and every depth `2..=max_depth`, and `base` sits inside the
/// tilde rule as a sub-automaton.
pub fn tilde_sft2(base: &Rule, widths: &[usize], max_depth: usize, budget: &Budget) -> Result<Report> {
    let mut r = Report::new("tilde-sft2");
    let tilde = build_tilde(base)?;
    let (sub, emb) = tilde_embedding(base)?;
    r.check(
        "sub-automaton",
        "the base rule is the sub-automaton of the tilde rule on {0} x C",
        check_sub_automaton(&tilde, &sub, base, &emb)?,
        format!("base={}", base.name()),
    );
    for &k in widths {
        for depth in max_depth.min(2)..=max_depth {
            let s = crate::subshift::check_sft_order2(&tilde, k, depth, budget)?;
            let mut detail = format!("paths={} traces={}", s.paths, s.traces);
            if let Some(w) = &s.witness {
                detail.push_str(&format!(" witness={}", w.render(tilde.alphabet()).replace('\n', "/")));
            }
            r.check(format!("sft2[k={k},T={depth}]"), "column factors are SFTs of order 2", s.holds, detail);
        }
    }
    Ok(r)
}

/// Preimage of the pure word `w` under `Δ^t`: the squad layer is a window
/// of the orbit of `ω(# B^m)ω` that fires exactly at step `t - 1`.
pub fn pure_preimage(spec: &DeltaSpec, w: &[Sym], t: usize) -> Result<Vec<Sym>> {
    if t == 0 {
        return Ok(w.to_vec());
    }
    let r = spec.radius;
    let len = w.len() + 2 * r * t;
    let m = spacing_set(usize::BITS - 1)
        .into_iter()
        .find(|&m| firing_time(m) + 1 >= t)
        .ok_or_else(|| Error::Precondition("no spacing fires late enough".into()))?;
    let start = firing_time(m) + 1 - t;
    let orbit = simulate(&sharp_config(m), start)?;
    let q = orbit.configs[start].window(0, len as i64);
    let da = &spec.alphabet;
    let pad = Sym(0);
    let a: Vec<Sym> = std::iter::repeat_n(pad, r * t).chain(w.iter().copied()).chain(std::iter::repeat_n(pad, r * t)).collect();
    Ok(a.iter().zip(&q).map(|(&a, &q)| da.pair(a, q)).collect())
}

/// Checks on the squad-frozen extension of `spread(base)` by the firing
/// squad: `spread(base)` is a sub-automaton; every pure word of length
/// `<= pure_len` is in every image up to `pure_t`, with an explicit preimage;
/// the predicted limit words of length `n` are in every image up to `t_max`,
/// and the images beyond the prediction never grow.
pub fn delta_limfs(base: &Rule, pure_len: usize, pure_t: usize, n: usize, t_max: usize, budget: &Budget) -> Result<Report> {
    let mut r = Report::new("delta-limfs");
    let (f, zero) = add_spreading(base)?;
    let (d, spec) = build_delta(&f, zero, fs_rule(), KILLER, FIRING)?;
    let na = f.alphabet().len();
    let pure: Vec<Sym> = (0..na).map(|i| Sym(i as u16)).collect();
    let emb = pure.iter().map(|&s| (s, spec.alphabet.pure(s))).collect();
    r.check(
        "sub-automaton",
        "F is the sub-automaton of Δ on the pure letters A",
        check_sub_automaton(&d, &pure, &f, &emb)?,
        format!("F={} letters={}", f.name(), d.alphabet().len()),
    );
    for len in 1..=pure_len {
        let mut words = Vec::new();
        for_each_word(na, len, &[], |w| words.push(w.to_vec()));
        for t in 0..=pure_t {
            let image = image_language_with(&d, len, t, Strategy::Automaton, budget)?;
            let mut witnessed = 0;
            let mut contained = 0;
            for w in &words {
                let u = pure_preimage(&spec, w, t)?;
                witnessed += usize::from(d.iterate_block(&u, t)? == *w);
                contained += usize::from(image.contains(w));
            }
            r.check(
                format!("pure-words[n={len},t={t}]"),
                "every configuration over A is in the limit set of Δ",
                witnessed == words.len() && contained == words.len(),
                format!("words={} witnessed={witnessed} in_image={contained}", words.len()),
            );
        }
    }
    let pred = predicted_limit_words(&spec.alphabet, zero, n, |q| Ok(recognize_word_with(q, budget)?.is_some()))?;
    let mut last_extra: Option<std::collections::BTreeSet<Vec<Sym>>> = None;
    for t in 0..=t_max {
        let image = image_language_with(&d, n, t, Strategy::Automaton, budget)?;
        let missing = pred.words.difference(&image.words).count();
        let extra: std::collections::BTreeSet<Vec<Sym>> = image.words.difference(&pred.words).cloned().collect();
        r.check(
            format!("predicted-in-image[n={n},t={t}]"),
            "the limit set of Δ contains A^Z and 0•(A^Z × X_S)•0",
            missing == 0,
            format!("predicted={} image={} missing={missing}", pred.len(), image.len()),
        );
        if let Some(prev) = &last_extra {
            r.check(
                format!("overapprox-shrinks[n={n},t={t}]"),
                "finite-time images decrease towards the limit set",
                extra.is_subset(prev),
                format!("extra={} previous={}", extra.len(), prev.len()),
            );
        }
        last_extra = Some(extra);
    }
    Ok(r)
}

/// `π2(image(f x g, n, t)) = image(g, n, t)` for all `n' <= n`, `t' <= t`.
pub fn limsim(f: &Rule, g: &Rule, n: usize, t: usize, budget: &Budget) -> Result<Report> {
    let mut r = Report::new("limsim");
    let prod = product_rule(f, g)?;
    let phi = FactorMap::second_projection(prod.alphabet().clone(), f.alphabet(), g.alphabet().clone())?;
    for ni in 1..=n {
        for ti in 0..=t {
            let lhs = apply_factor_language(&phi, &image_language(&prod, ni, ti, budget)?)?;
            let rhs = image_language(g, ni, ti, budget)?;
            r.check(
                format!("projection[n={ni},t={ti}]"),
                "projected images of the product equal the images of the second rule",
                lhs.words == rhs.words,
                format!("projected={} direct={}", lhs.len(), rhs.len()),
            );
        }
    }
    Ok(r)
}

/// The firing squad contract: `γ` has histories of every depth up to
/// `depth`; `ω(# B^n)ω` fires synchronously without `κ` for the spacings
/// `2^j - 1`, `j <= max_j`; after `2n` steps every word of length
/// `n <= max_n` containing `γ` lies over `{κ, γ}`.
pub fn fs_contract(depth: usize, max_j: u32, max_n: usize, budget: &Budget) -> Result<Report> {
    let mut r = Report::new("fs-contract");
    for t in 1..=depth {
        r.check(
            format!("gamma-history[T={t}]"),
            "∞γ has an infinite backward history avoiding κ and γ",
            backward_reach(&[FIRING], t)?,
            "",
        );
    }
    for n in spacing_set(max_j) {
        let fire = firing_time(n);
        let o = firing_outcome(n, fire)?;
        r.check(
            format!("fires[n={n}]"),
            "ω(#B^n)ω fires synchronously for n in the spacing set",
            o.synchronous && o.first_firing == Some(fire) && o.first_killer.is_none(),
            format!("first_firing={} first_killer={}", show(o.first_firing), show(o.first_killer)),
        );
    }
    for n in 1..=max_n {
        let l = image_language(fs_rule(), n, 2 * n, budget)?;
        let gamma: Vec<&Vec<Sym>> = l.words.iter().filter(|w| w.contains(&FIRING)).collect();
        let mixed = gamma.iter().filter(|w| w.iter().any(|&s| s != FIRING && s != KILLER)).count();
        r.check(
            format!("gamma-isolated[n={n},t={}]", 2 * n),
            "after enough steps γ only borders γ and κ",
            mixed == 0,
            format!("words={} with_gamma={} mixed={mixed}", l.len(), gamma.len()),
        );
    }
    Ok(r)
}

fn show(t: Option<usize>) -> String {
    t.map_or_else(|| "none".to_string(), |t| t.to_string())
}

/// Recognizer checks: soundness against the backward oracle for words up
/// to `max_len` at `depth`, factor closure up to `closure_len`, the
/// periodic family, and the orbit schemas against simulation.
pub fn xs_crosscheck(max_len: usize, depth: usize, closure_len: usize, budget: &Budget) -> Result<Report> {
    let mut r = Report::new("xs-crosscheck");
    let cc = cross_check(max_len, depth, budget)?;
    r.check(
        format!("sound[maxLen={max_len},T={depth}]"),
        "every recognized word has a backward history of the tested depth",
        cc.is_sound(),
        cc.summary().trim().replace('\n', " "),
    );
    let bad = factor_closure_failures(closure_len, budget)?;
    r.check(
        format!("factor-closure[len<={closure_len}]"),
        "the recognized language is factorial",
        bad.is_empty(),
        format!("failures={}", bad.len()),
    );
    let fs_a = crate::firing_squad::fs_alphabet();
    for n in 1..=8 {
        let c = sharp_config(n);
        let label = classify_config_with(&c, budget)?;
        let w = c.window(0, n as i64 + 2);
        let reach = backward_reach(&w, 4)?;
        r.check(
            format!("periodic-family[n={n}]"),
            "ω(#B^n)ω is in X_S through the doubling chain",
            label == Some(CaseLabel::TwoSharps) && reach,
            format!("label={} window={} reach4={reach}", label.map_or("none", |l| l.name()), fs_a.format_word(&w)),
        );
    }
    let mut mismatches = 0;
    for n in 1..=6 {
        for t in 0..=40 {
            mismatches += usize::from(!schema_matches_simulation(&orbit_period_schemas(n, t)?));
        }
    }
    r.check(
        "schema-agreement[n<=6,t<=40]",
        "orbit periods follow the signal geometry",
        mismatches == 0,
        format!("mismatches={mismatches}"),
    );
    r.check(
        "relations[m<=15]",
        "signal positions satisfy the committed linear relations",
        extract_relations(15).as_deref() == Some(&SIGNAL_LINES[..]),
        "",
    );
    Ok(r)
}

/// Accepted words of length `<= max_len` with a rejected factor, over the
/// whole firing squad alphabet.
pub fn factor_closure_failures(max_len: usize, budget: &Budget) -> Result<Vec<Vec<Sym>>> {
    use rayon::prelude::*;
    use std::collections::HashSet;
    let k = crate::firing_squad::FS_STATES.len();
    let mut accepted: Vec<HashSet<Vec<Sym>>> = vec![HashSet::from([Vec::new()])];
    let mut bad = Vec::new();
    for n in 1..=max_len {
        let mut words = Vec::new();
        for_each_word(k, n, &[], |w| words.push(w.to_vec()));
        let acc: Vec<Vec<Sym>> = words
            .into_par_iter()
            .map(|w| Ok(recognize_word_with(&w, budget)?.map(|_| w)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        for w in &acc {
            if !accepted[n - 1].contains(&w[1..]) || !accepted[n - 1].contains(&w[..n - 1]) {
                bad.push(w.clone());
            }
        }
        accepted.push(acc.into_iter().collect());
    }
    Ok(bad)
}

/// Runs a suite by name with its default parameters.
pub fn run_default(suite: &str, budget: &Budget) -> Result<Report> {
    match suite {
        "tilde-sft2" => tilde_sft2(&Rule::elementary(110), &[1], 6, budget),
        "delta-limfs" => delta_limfs(&Rule::elementary(110), 3, 6, 2, 7, budget),
        "limsim" => limsim(&Rule::shift(), &Rule::min(), 3, 3, budget),
        "fs-contract" => fs_contract(6, 4, 4, budget),
        "xs-crosscheck" => xs_crosscheck(2, 6, 4, budget),
        _ => Err(Error::Precondition(format!("unknown suite `{suite}`; expected one of {}", SUITES.join(", ")))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_text_lists_assertions() {
        let mut r = Report::new("demo");
        r.check("a", "first", true, "x=1");
        r.check("b", "second", false, "");
        assert!(!r.passed());
        let text = r.to_text();
        assert!(text.starts_with("suite=demo\n"));
        assert!(text.contains("assertion=a status=PASS claim=\"first\" x=1\n"));
        assert!(text.contains("assertion=b status=FAIL claim=\"second\"\n"));
        assert!(text.ends_with("passed=1 failed=1\nresult=FAIL\n"));
    }

    #[test]
    fn small_suites_pass() {
        let b = Budget::default();
        assert!(tilde_sft2(&Rule::elementary(90), &[1, 2], 3, &b).unwrap().passed());
        assert!(limsim(&Rule::shift(), &Rule::min(), 2, 2, &b).unwrap().passed());
        assert!(fs_contract(2, 2, 2, &b).unwrap().passed());
    }

    #[test]
    fn pure_preimages_fire_on_time() {
        let (f, zero) = add_spreading(&Rule::shift()).unwrap();
        let (d, spec) = build_delta(&f, zero, fs_rule(), KILLER, FIRING).unwrap();
        let w = vec![Sym(1), Sym(0)];
        for t in 0..=9 {
            let u = pure_preimage(&spec, &w, t).unwrap();
            assert_eq!(u.len(), 2 + 2 * t);
            assert_eq!(d.iterate_block(&u, t).unwrap(), w, "t={t}");
        }
    }

    #[test]
    fn unknown_suite() {
        assert!(matches!(run_default("nope", &Budget::default()), Err(Error::Precondition(_))));
    }

    #[test]
    fn budget_errors_propagate() {
        let tight = Budget {
            max_enumeration: 4,
            max_states: 4,
        };
        assert!(matches!(limsim(&Rule::shift(), &Rule::min(), 3, 2, &tight), Err(Error::BudgetExceeded { .. })));
    }
}
