use std::io::Write;
use std::path::Path;

use clandestine_ca::constructions::{add_spreading, build_delta, build_tilde};
use clandestine_ca::firing_squad::{
    doubling_chain, firing_outcome, firing_time, fs_alphabet, fs_rule_file, lift_euclidean, sharp_config, simulate,
    simulate_with, HistoryDiagram,
};
use clandestine_ca::render;
use clandestine_ca::subshift::{
    check_sft_order2, image_language_with, limit_language, trace_prefixes, two_approx, Budget, LanguageSample,
    Strategy, TwoApproxGraph,
};
use clandestine_ca::verify;
use clandestine_ca::xs::{classify_config_with, cross_check, orbit_period_schemas, recognize_word_with, CaseLabel};
use clandestine_ca::{Alphabet, Error, PresentedConfig, Rule, Sym};

use crate::args::*;
use crate::Failure;

type Outcome = Result<(), Failure>;

pub fn run(command: Command) -> Outcome {
    let budget = Budget::from_env()?;
    match command {
        Command::Simulate(a) => cmd_simulate(&a, &budget),
        Command::Build(b) => cmd_build(b),
        Command::Trace(a) => cmd_trace(&a, &budget),
        Command::Limit(a) => cmd_limit(&a, &budget),
        Command::Fs(c) => cmd_fs(c, &budget),
        Command::Xs(c) => cmd_xs(c, &budget),
        Command::Verify(a) => cmd_verify(&a, &budget),
    }
}

/// Builtin rule name or path to a rule file.
pub fn load_rule(spec: &str) -> Result<Rule, Failure> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or(spec);
        return Ok(Rule::parse_rule_file(name, &text)?);
    }
    Rule::builtin(spec).map_err(|_| Failure::Input(format!("`{spec}` is neither a builtin rule nor a rule file")))
}

fn emit(output: &Output, bytes: &[u8]) -> Outcome {
    match &output.out {
        Some(p) => std::fs::write(p, bytes)?,
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(bytes).and_then(|()| out.flush()) {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                r => r?,
            }
        }
    }
    Ok(())
}

fn print(text: &str) -> Outcome {
    emit(&Output { out: None }, text.as_bytes())
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn parse_word(a: &Alphabet, text: &str) -> Result<Vec<Sym>, Failure> {
    Ok(a.parse_word(text)?)
}

fn check_cells(budget: &Budget, width: usize, rows: usize) -> Outcome {
    let cells = width as u128 * rows as u128;
    if cells > budget.max_enumeration {
        return Err(Error::BudgetExceeded {
            what: "diagram cells",
            needed: cells,
            limit: budget.max_enumeration,
        }
        .into());
    }
    Ok(())
}

fn cmd_simulate(a: &SimulateArgs, budget: &Budget) -> Outcome {
    let rule = load_rule(&a.rule)?;
    let alphabet = rule.alphabet().clone();
    let (config, default_window) = match (&a.periodic, &a.config) {
        (Some(p), _) => {
            let period = parse_word(&alphabet, p)?;
            let n = period.len() as i64;
            (PresentedConfig::periodic(alphabet.clone(), period)?, (0, n))
        }
        (None, Some(c)) => {
            let c = PresentedConfig::parse(alphabet.clone(), c)?;
            let spread = (rule.radius() * a.steps) as i64;
            let pad = c.left.len().max(c.right.len()) as i64;
            let window = (c.origin - spread - pad, c.end() + spread + pad);
            (c, window)
        }
        (None, None) => return Err(Failure::Input("give --periodic or --config".into())),
    };
    let from = a.from.unwrap_or(default_window.0);
    let to = a.to.unwrap_or(default_window.1);
    if to <= from {
        return Err(Failure::Input("empty window: --to must exceed --from".into()));
    }
    check_cells(budget, (to - from) as usize, a.steps + 1)?;
    let orbit = simulate_with(&rule, &config, a.steps)?;
    let rows = render::spacetime(&orbit.configs, from, to);
    let bytes = match a.render {
        Render::Ascii => render::ascii(&alphabet, &rows).into_bytes(),
        Render::Pgm => render::pgm(&alphabet, &rows),
        Render::Text => rows.iter().map(|r| alphabet.format_word(r) + "\n").collect::<String>().into_bytes(),
    };
    emit(&a.output, &bytes)
}

fn cmd_build(b: BuildCommand) -> Outcome {
    match b {
        BuildCommand::Tilde { base, output } => {
            let rule = build_tilde(&load_rule(&base)?)?;
            emit(&output, rule.to_rule_file().as_bytes())
        }
        BuildCommand::Spread { base, output } => {
            let (rule, _) = add_spreading(&load_rule(&base)?)?;
            emit(&output, rule.to_rule_file().as_bytes())
        }
        BuildCommand::Delta {
            base,
            squad,
            zero,
            killer,
            firing,
            output,
        } => {
            let f = load_rule(&base)?;
            let s = load_rule(&squad)?;
            let zero = match zero {
                Some(z) => f.alphabet().require(&z)?,
                None => *f.spreading_states().first().ok_or_else(|| {
                    Failure::Input(format!("{} has no spreading state; build it with `build spread` first", f.name()))
                })?,
            };
            let killer = s.alphabet().require(&killer)?;
            let firing = s.alphabet().require(&firing)?;
            let (rule, _) = build_delta(&f, zero, &s, killer, firing)?;
            emit(&output, rule.to_rule_file().as_bytes())
        }
    }
}

#[derive(serde::Serialize)]
struct SftJson<'a> {
    k: usize,
    depth: usize,
    paths: String,
    traces: usize,
    holds: bool,
    witness: Option<&'a str>,
}

fn cmd_trace(a: &TraceArgs, budget: &Budget) -> Outcome {
    let rule = load_rule(&a.rule)?;
    let alphabet = rule.alphabet();
    if let Some(path) = &a.paths_of {
        let g = TwoApproxGraph::parse(alphabet, &std::fs::read_to_string(path)?)?;
        return emit(&a.output, format!("k={} T={} paths={}\n", g.width, a.depth, g.count_paths(a.depth)).as_bytes());
    }
    if a.graph {
        return emit(&a.output, two_approx(&rule, a.k, budget)?.to_text(alphabet).as_bytes());
    }
    if a.check {
        let r = check_sft_order2(&rule, a.k, a.depth, budget)?;
        let witness = r.witness.as_ref().map(|w| w.render(alphabet));
        let text = if a.json {
            json(&SftJson {
                k: r.width,
                depth: r.depth,
                paths: r.paths.to_string(),
                traces: r.traces,
                holds: r.holds,
                witness: witness.as_deref(),
            })
        } else {
            let mut s = format!("k={}\nT={}\npaths={}\ntraces={}\nholds={}\n", r.width, r.depth, r.paths, r.traces, r.holds);
            if let Some(w) = &witness {
                s.push_str(&format!("witness={w}\n"));
            }
            s
        };
        return emit(&a.output, text.as_bytes());
    }
    let cols = trace_prefixes(&rule, a.k, a.depth, budget)?;
    let text: String = cols.iter().map(|c| c.render(alphabet) + "\n").collect();
    emit(&a.output, text.as_bytes())
}

fn strategy(s: StrategyArg) -> Strategy {
    match s {
        StrategyArg::Auto => Strategy::Auto,
        StrategyArg::Enumerate => Strategy::Enumerate,
        StrategyArg::Automaton => Strategy::Automaton,
    }
}

fn cmd_limit(a: &LimitArgs, budget: &Budget) -> Outcome {
    let rule = load_rule(&a.rule)?;
    if a.chain {
        let report = limit_language(&rule, a.n, a.t, budget)?;
        return emit(&a.output, report.to_text().as_bytes());
    }
    let sample = image_language_with(&rule, a.n, a.t, strategy(a.strategy), budget)?;
    if let Some(path) = &a.against {
        let other = LanguageSample::parse(rule.alphabet().clone(), &std::fs::read_to_string(path)?)?;
        if other.n != sample.n {
            return Err(Failure::Input(format!("sample has n={}, expected {}", other.n, sample.n)));
        }
        let text = format!(
            "words={}\nother={}\nsubset={}\nsuperset={}\nequal={}\n",
            sample.len(),
            other.len(),
            sample.is_subset(&other),
            other.is_subset(&sample),
            sample.words == other.words
        );
        return emit(&a.output, text.as_bytes());
    }
    emit(&a.output, sample.to_text().as_bytes())
}

fn show(t: Option<usize>) -> String {
    t.map_or_else(|| "none".to_string(), |t| t.to_string())
}

#[derive(serde::Serialize)]
struct FireJson {
    n: usize,
    steps: usize,
    first_firing: Option<usize>,
    first_killer: Option<usize>,
    synchronous: bool,
}

fn cmd_fs(c: FsCommand, budget: &Budget) -> Outcome {
    let a = fs_alphabet();
    match c {
        FsCommand::Rule { output } => emit(&output, fs_rule_file().as_bytes()),
        FsCommand::Fire { n, steps, json: as_json } => {
            let steps = steps.unwrap_or(firing_time(n));
            check_cells(budget, 2 * (n + 1) * (steps + 1), 1)?;
            let o = firing_outcome(n, steps)?;
            let text = if as_json {
                json(&FireJson {
                    n,
                    steps,
                    first_firing: o.first_firing,
                    first_killer: o.first_killer,
                    synchronous: o.synchronous,
                })
            } else {
                format!(
                    "n={n}\nsteps={steps}\nfirst_firing={}\nfirst_killer={}\nsynchronous={}\n",
                    show(o.first_firing),
                    show(o.first_killer),
                    o.synchronous
                )
            };
            print(&text)
        }
        FsCommand::Chain { j } => {
            if j >= 16 {
                return Err(Failure::Input("j must be below 16".into()));
            }
            match doubling_chain(j)? {
                Some(links) => print(&links.iter().map(|l| format!("t={} spacing={}\n", l.time, l.spacing)).collect::<String>()),
                None => Err(Failure::Assertion(format!("the orbit of spacing {} leaves the doubling chain", (1usize << j) - 1))),
            }
        }
        FsCommand::History {
            n,
            steps,
            width,
            render: how,
            output,
        } => {
            let width = width.unwrap_or(2 * (n + 1) + 1);
            check_cells(budget, width, steps + 1)?;
            let orbit = simulate(&sharp_config(n), steps)?;
            let d = HistoryDiagram::from_orbit(&orbit, 0, width as i64)?;
            let bytes = match how {
                HistoryRender::Ascii => render::ascii(&a, &d.rows).into_bytes(),
                HistoryRender::Pgm => render::pgm(&a, &d.rows),
                HistoryRender::Svg => lift_euclidean(&d)?.to_svg().into_bytes(),
            };
            emit(&output, &bytes)
        }
        FsCommand::Reach { word, depth } => {
            let w = parse_word(&a, &word)?;
            let reach = clandestine_ca::firing_squad::backward_reach_with(&w, depth, budget.max_states)?;
            print(&format!("word={}\nT={depth}\nreach={reach}\n", a.format_word(&w)))
        }
        FsCommand::Schema { n, t } => {
            let s = orbit_period_schemas(n, t)?;
            let phase = format!("{:?}", s.phase).to_lowercase();
            print(&format!(
                "n={n}\nt={t}\nphase={phase}\ncurrent_spacing={}\nschema={s}\nperiod={}\nword={}\nmatches_simulation={}\n",
                s.current,
                s.period(),
                a.format_word(&s.word()),
                clandestine_ca::xs::schema_matches_simulation(&s)
            ))
        }
    }
}

#[derive(serde::Serialize)]
struct Verdict {
    input: String,
    accepted: bool,
    label: Option<CaseLabel>,
}

fn verdict(input: String, label: Option<CaseLabel>, as_json: bool) -> String {
    if as_json {
        return json(&Verdict {
            input,
            accepted: label.is_some(),
            label,
        });
    }
    format!(
        "input={input}\naccepted={}\nlabel={}\n",
        label.is_some(),
        label.map_or("none", |l| l.name())
    )
}

fn cmd_xs(c: XsCommand, budget: &Budget) -> Outcome {
    let a = fs_alphabet();
    match c {
        XsCommand::Recognize { word, json: as_json } => {
            let w = parse_word(&a, &word)?;
            let label = recognize_word_with(&w, budget)?;
            print(&verdict(a.format_word(&w), label, as_json))
        }
        XsCommand::Classify {
            left,
            center,
            right,
            json: as_json,
        } => {
            let c = PresentedConfig::new(a.clone(), parse_word(&a, &left)?, parse_word(&a, &center)?, parse_word(&a, &right)?, 0)?;
            let label = classify_config_with(&c, budget)?;
            let parts = [
                format!("ω({})", a.format_word(&c.left)),
                a.format_word(&c.center),
                format!("({})ω", a.format_word(&c.right)),
            ];
            let input = parts.iter().filter(|p| !p.is_empty()).cloned().collect::<Vec<_>>().join(" ");
            print(&verdict(input, label, as_json))
        }
        XsCommand::Crosscheck {
            max_len,
            depth,
            lines,
            output,
        } => {
            let r = cross_check(max_len, depth, budget)?;
            let text = if lines { r.to_text() } else { r.summary() };
            emit(&output, text.as_bytes())?;
            if r.is_sound() {
                Ok(())
            } else {
                Err(Failure::Assertion(format!("{} recognized words have no history of depth {depth}", r.unsound().count())))
            }
        }
    }
}

fn rule_or(spec: &Option<String>, default: &str) -> Result<Rule, Failure> {
    load_rule(spec.as_deref().unwrap_or(default))
}

fn cmd_verify(a: &VerifyArgs, budget: &Budget) -> Outcome {
    let report = match a.suite {
        Suite::TildeSft2 => {
            let k = if a.k.is_empty() { vec![1] } else { a.k.clone() };
            verify::tilde_sft2(&rule_or(&a.base, "elementary:110")?, &k, a.depth.unwrap_or(6), budget)?
        }
        Suite::DeltaLimfs => verify::delta_limfs(
            &rule_or(&a.base, "elementary:110")?,
            a.pure_len.unwrap_or(3),
            a.pure_t.unwrap_or(6),
            a.n.unwrap_or(2),
            a.t.unwrap_or(7),
            budget,
        )?,
        Suite::Limsim => {
            let (f, g) = match a.product.as_slice() {
                [f, g] => (load_rule(f)?, load_rule(g)?),
                _ => (Rule::shift(), Rule::min()),
            };
            verify::limsim(&f, &g, a.n.unwrap_or(3), a.t.unwrap_or(3), budget)?
        }
        Suite::FsContract => verify::fs_contract(a.depth.unwrap_or(6), a.max_j.unwrap_or(4), a.n.unwrap_or(4), budget)?,
        Suite::XsCrosscheck => {
            verify::xs_crosscheck(a.n.unwrap_or(2), a.depth.unwrap_or(6), a.closure_len.unwrap_or(4), budget)?
        }
    };
    let text = if a.json { json(&report) } else { report.to_text() };
    emit(&a.output, text.as_bytes())?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Assertion(format!("{} assertions failed in {}", report.failures().count(), report.suite)))
    }
}

