use num_bigint::BigInt;
use serde_json::json;
use underapprox::best_under::{
    best_under, best_under_cached, chu_condition, eventually_greedy_probe,
    eventually_greedy_probe_cached, nathanson_condition, BestUnderResult, ResultCache,
    SearchConfig,
};
use underapprox::construct::{build_c, check_claims, competitor};
use underapprox::egyptian::{decompose, greedy_approx, greedy_under, SeqSpec, Tail};
use underapprox::limits::{seq_limit, vardi};
use underapprox::numeric::parse_decimal;
use underapprox::sylvester::sylvester_terms;
use underapprox::{Ball, Error, Rational, Result, MAX_DIGITS};

use crate::cli::Command;
use crate::config::Config;
use crate::output::{exact_and_decimal, Report, Table};

fn rational(s: &str) -> Result<Rational> {
    s.parse()
}

fn load_spec(s: &str) -> Result<SeqSpec> {
    let text = if s.trim_start().starts_with('{') {
        s.to_string()
    } else {
        std::fs::read_to_string(s).map_err(|e| Error::Io(format!("{s}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("bad SeqSpec: {e}")))
}

fn list<T: ToString>(xs: &[T]) -> String {
    let parts: Vec<String> = xs.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

/// Digits to request so the printed bound is usually `1e-digits`.
fn guarded(digits: u32) -> u32 {
    (digits + 2).min(MAX_DIGITS)
}

/// The midpoint rounded to `digits` places, with a bound covering both the
/// ball radius and the rounding.
fn ball_line(b: &Ball, digits: u32) -> String {
    let shown = b.to_decimal(digits);
    let shown_q = parse_decimal(&shown).expect("rendered decimal parses");
    let err = (b.midpoint().to_rational() - shown_q).abs() + b.radius().to_rational();
    let unit = Rational::new(1, BigInt::from(10).pow(digits)).expect("nonzero");
    let k = (err / &unit).ceil().max(BigInt::from(1));
    format!("{shown} ± {k}e-{digits}")
}

fn tail_text(spec: &SeqSpec) -> String {
    match spec.tail() {
        Tail::None => "none".into(),
        Tail::Sylvester { from } => format!("sylvester from term {from}"),
        Tail::GreedyUnder { target } => format!("greedy underapproximation of {target}"),
    }
}

fn search_config(cfg: &Config, all_ties: bool) -> SearchConfig {
    let s = SearchConfig {
        node_cap: cfg.node_cap,
        execution: cfg.execution,
        ..SearchConfig::default()
    };
    if all_ties {
        s.with_ties()
    } else {
        s
    }
}

fn open_cache(cfg: &Config) -> Result<Option<ResultCache>> {
    let Some(path) = &cfg.cache_path else {
        return Ok(None);
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    }
    ResultCache::open(path).map(Some)
}

fn claim_range(s: Option<&str>, cap: usize) -> Result<(usize, usize)> {
    let Some(s) = s else { return Ok((1, cap)) };
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidInput(format!("bad m range {s:?}")))
    };
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => (num(s)?, num(s)?),
    };
    if lo == 0 || lo > hi {
        return Err(Error::InvalidInput(format!("bad m range {s:?}")));
    }
    Ok((lo, hi))
}

pub fn run(command: &Command, cfg: &Config) -> Result<Report> {
    match command {
        Command::GreedyApprox { lambda } => {
            let lambda = rational(lambda)?;
            let seq = greedy_approx(&lambda)?;
            Report::new(
                seq.to_string(),
                json!({ "lambda": lambda, "denominators": seq }),
            )
        }
        Command::GreedyUnder { lambda, terms } => {
            let lambda = rational(lambda)?;
            let seq = greedy_under(&lambda, *terms, cfg.term_cap)?;
            let sum = seq.sum();
            let gap = &lambda - &sum;
            let human = format!(
                "{seq}\nsum: {}\ngap: {}",
                exact_and_decimal(&sum),
                exact_and_decimal(&gap)
            );
            Report::new(
                human,
                json!({ "lambda": lambda, "n": terms, "denominators": seq, "sum": sum, "gap": gap }),
            )
        }
        Command::Decompose { lambda } => {
            let d = decompose(&rational(lambda)?)?;
            let human = format!(
                "approximation: {}\nsplit index: {}\ntail: {}",
                d.approx_component, d.split_index, d.tail_unit_fraction
            );
            Report::new(human, &d)
        }
        Command::Sylvester { seed, terms } => {
            let seed = rational(seed)?;
            let t = sylvester_terms(&seed, *terms, cfg.term_cap)?;
            Report::new(list(&t), json!({ "seed": seed, "terms": t }))
        }
        Command::Construct {
            spec,
            competitor: comp,
            limit,
        } => {
            let a = match (spec, comp) {
                (Some(s), None) => load_spec(s)?,
                (None, Some(c)) => {
                    let (s, d) = c.split_once(',').ok_or_else(|| {
                        Error::InvalidInput(format!("competitor must be S,DELTA, got {c:?}"))
                    })?;
                    let bad =
                        || Error::InvalidInput(format!("competitor must be S,DELTA, got {c:?}"));
                    competitor(
                        s.trim().parse().map_err(|_| bad())?,
                        d.trim().parse().map_err(|_| bad())?,
                        cfg.claim_cap,
                    )?
                }
                _ => return Err(Error::InvalidInput("give a SeqSpec or --competitor".into())),
            };
            let c = build_c(&a, cfg.claim_cap)?;
            let mut human = format!(
                "divergence m: {}\nc prefix: {}\nc tail: {}\nremainder: {}\nclaims: {} {}",
                c.divergence_m,
                list(c.c_spec.prefix()),
                tail_text(&c.c_spec),
                c.remainder_unit_fraction,
                if c.claims.claim1_ok { "ok" } else { "FAIL" },
                if c.claims.claim2_ok { "ok" } else { "FAIL" },
            );
            let lim = if *limit {
                let l = seq_limit(&c.c_spec, guarded(cfg.digits))?;
                human.push_str(&format!("\nlimit: {}", ball_line(&l.value, cfg.digits)));
                Some(l)
            } else {
                None
            };
            Report::new(human, json!({ "construction": c, "limit": lim }))
        }
        Command::Limit { spec } => {
            let spec = load_spec(spec)?;
            let l = seq_limit(&spec, guarded(cfg.digits))?;
            let human = format!(
                "{}\nstart index N: {}\nseries terms: {}",
                ball_line(&l.value, cfg.digits),
                l.start_index_n,
                l.series_terms_used
            );
            Report::new(human, &l)
        }
        Command::Vardi => {
            let v = vardi(guarded(cfg.digits))?;
            Report::new(
                ball_line(&v, cfg.digits),
                json!({ "digits": cfg.digits, "decimal": v.to_decimal(cfg.digits), "value": v }),
            )
        }
        Command::BestUnder {
            lambda,
            terms,
            all_ties,
        } => {
            let lambda = rational(lambda)?;
            let scfg = search_config(cfg, *all_ties);
            let r = match open_cache(cfg)? {
                Some(cache) => best_under_cached(&lambda, *terms, &scfg, &cache)?,
                None => best_under(&lambda, *terms, &scfg)?,
            };
            best_under_report(&lambda, &r, *all_ties, cfg)
        }
        Command::ProbeGreedy { theta, terms } => {
            let theta = rational(theta)?;
            let scfg = search_config(cfg, false);
            let p = match open_cache(cfg)? {
                Some(cache) => eventually_greedy_probe_cached(&theta, *terms, &scfg, &cache)?,
                None => eventually_greedy_probe(&theta, *terms, &scfg)?,
            };
            let rows: Vec<Vec<String>> = p
                .per_n
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        r.r_n.to_string(),
                        r.witness.to_string(),
                        r.greedy_extension.to_string(),
                    ]
                })
                .collect();
            let mut human = String::from("n  R_n  witness  greedy extension\n");
            for r in &rows {
                human.push_str(&format!("{}  {}  {}  {}\n", r[0], r[1], r[2], r[3]));
            }
            human.push_str(&match p.candidate_n0 {
                Some(n0) => format!("candidate n0: {n0}"),
                None => "candidate n0: none (last row is not a greedy extension)".into(),
            });
            Ok(Report::new(human, &p)?.with_table(Table {
                headers: vec!["n", "R_n", "witness", "greedy_extension"],
                rows,
            }))
        }
        Command::CheckClaims { m } => {
            let (lo, hi) = claim_range(m.as_deref(), cfg.claim_cap)?;
            let mut reports = Vec::new();
            let mut rows = Vec::new();
            let mut all_ok = true;
            for m in lo..=hi {
                let r = check_claims(m, cfg.claim_cap)?;
                let ok = r.claim1_ok && r.claim2_ok;
                all_ok &= ok;
                rows.push(vec![
                    m.to_string(),
                    r.u_m.to_string(),
                    r.remainder.to_string(),
                    r.claim1_ok.to_string(),
                    r.claim2_ok.to_string(),
                    if ok { "ok" } else { "FAIL" }.to_string(),
                ]);
                reports.push(r);
            }
            let mut human = String::from("m  u_m  remainder  claim1  claim2  status\n");
            for r in &rows {
                human.push_str(&r.join("  "));
                human.push('\n');
            }
            let mut report = Report::new(human, &reports)?.with_table(Table {
                headers: vec!["m", "u_m", "remainder", "claim1", "claim2", "status"],
                rows,
            });
            if !all_ok {
                report.exit = 4;
            }
            Ok(report)
        }
        Command::Conditions { fraction } => {
            let (p, q) = fraction
                .split_once('/')
                .ok_or_else(|| Error::InvalidInput(format!("expected p/q, got {fraction:?}")))?;
            let int = |t: &str| {
                t.trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::InvalidInput(format!("not an integer: {t:?}")))
            };
            let (p, q) = (int(p)?, int(q)?);
            let n = nathanson_condition(&p, &q)?;
            let c = chu_condition(&p, &q)?;
            Report::new(
                format!("nathanson: {n}\nchu: {c}"),
                json!({ "p": p.to_string(), "q": q.to_string(), "nathanson": n, "chu": c }),
            )
        }
    }
}

fn best_under_report(
    lambda: &Rational,
    r: &BestUnderResult,
    all_ties: bool,
    cfg: &Config,
) -> Result<Report> {
    let greedy = greedy_under(lambda, r.n, r.n.max(cfg.term_cap))?;
    let mut human = format!(
        "{}\nsum: {}\ngreedy: {} = {}",
        r.canonical_witness,
        exact_and_decimal(&r.optimum_sum),
        greedy,
        greedy.sum()
    );
    let mut unique = None;
    if all_ties {
        let u = r.ties.len() == 1 && !r.ties_truncated;
        unique = Some(u);
        human.push_str(&format!("\nunique: {}", if u { "yes" } else { "no" }));
        for t in &r.ties {
            human.push_str(&format!("\ntie: {t}"));
        }
    }
    human.push_str(&format!("\nnodes explored: {}", r.nodes_explored));
    if !r.complete {
        human.push_str(&format!(
            "\nINCOMPLETE: node budget of {} exhausted",
            cfg.node_cap
        ));
    }
    let mut report = Report::new(
        human,
        json!({ "result": r, "greedy": greedy, "unique": unique }),
    )?;
    if !r.complete || r.ties_truncated {
        report.exit = 3;
    }
    Ok(report)
}
