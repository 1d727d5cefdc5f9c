//! Subcommand implementations.

use perron_core::algebraic::parse_polynomial;
use perron_core::beta::{admissible_counts_for, greedy_digits, lower_bound_rows, quasi_greedy_one, QThetaNumber};
use perron_core::digits::{
    advance_level_with, count_sequence_with, find_height_witness_with, growth_ratios, guess_recurrence, level_gap,
    verify_witness, EnumerationConfig, LevelSet, SearchConfig, Truncation,
};
use perron_core::power_sums::{angular_average, newton_traces, real_power_sum, trace_ratio};
use perron_core::{Error, MinPoly, PerronStatus};
use serde_json::{json, Value};

use crate::emit::{big, enclosure, header, int, render_json, Format, Table};
use crate::{parse_memory, Command, RunConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NOT_PERRON: u8 = 1;
pub const EXIT_UNDECIDED: u8 = 2;
pub const EXIT_INVALID: u8 = 3;
pub const EXIT_RESOURCE: u8 = 4;

pub struct Outcome {
    pub body: Option<String>,
    pub code: u8,
    pub message: Option<String>,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Self { body: Some(body), code: EXIT_OK, message: None }
    }

    fn fail(code: u8, message: impl Into<String>) -> Self {
        Self { body: None, code, message: Some(format!("error: {}", message.into())) }
    }
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotPerron | Error::NonRealDominant | Error::NegativeDominant | Error::DominantNotAboveOne => {
            EXIT_NOT_PERRON
        }
        Error::Undecided => EXIT_UNDECIDED,
        Error::MemoryBudget { .. }
        | Error::CoordinateOverflow { .. }
        | Error::SearchExhausted { .. }
        | Error::PrecisionExhausted(_) => EXIT_RESOURCE,
        _ => EXIT_INVALID,
    }
}

impl From<Error> for Outcome {
    fn from(e: Error) -> Self {
        Outcome::fail(exit_code(&e), e.to_string())
    }
}

/// Validated inputs shared by every subcommand.
struct Setup<'a> {
    text: &'a str,
    mp: MinPoly,
    cfg: &'a RunConfig,
    memory: u64,
}

impl Setup<'_> {
    fn n(&self) -> Result<usize, Outcome> {
        match self.cfg.n {
            None => Err(Outcome::fail(EXIT_INVALID, "--n is required for this command")),
            Some(0) => Err(Outcome::fail(EXIT_INVALID, "--n must be at least 1")),
            Some(n) => Ok(n),
        }
    }

    fn enumeration(&self) -> EnumerationConfig {
        EnumerationConfig { memory_budget: self.memory, threads: self.cfg.threads }
    }

    fn require_perron(&self) -> Result<(), Outcome> {
        match self.mp.is_perron() {
            PerronStatus::Perron => Ok(()),
            PerronStatus::NotPerron => Err(Error::NotPerron.into()),
            PerronStatus::Undecided => Err(Error::Undecided.into()),
        }
    }
}

fn setup(cfg: &RunConfig) -> Result<Setup<'_>, Outcome> {
    if cfg.precision < 64 {
        return Err(Outcome::fail(EXIT_INVALID, "--precision must be at least 64"));
    }
    if cfg.threads == 0 {
        return Err(Outcome::fail(EXIT_INVALID, "--threads must be at least 1"));
    }
    let memory = parse_memory(&cfg.memory)
        .ok_or_else(|| Outcome::fail(EXIT_INVALID, format!("cannot parse memory limit {:?}", cfg.memory)))?;
    let text = cfg.poly.as_deref().ok_or_else(|| Outcome::fail(EXIT_INVALID, "--poly is required"))?;
    let poly = parse_polynomial(text)?;
    let mp = MinPoly::new(poly, cfg.precision)?;
    Ok(Setup { text, mp, cfg, memory })
}

pub fn run(command: Command, cfg: &RunConfig) -> Outcome {
    let result = setup(cfg).and_then(|s| match command {
        Command::Check => check(&s),
        Command::Count => count(&s),
        Command::Witness => witness(&s),
        Command::Gap => gap(&s),
        Command::Traces => traces(&s),
        Command::Angular => angular(&s),
        Command::Powersum => powersum(&s),
        Command::Expand => expand(&s),
        Command::Admissible => admissible(&s),
    });
    result.unwrap_or_else(|o| o)
}

fn verdict(status: PerronStatus) -> (&'static str, u8) {
    match status {
        PerronStatus::Perron => ("true", EXIT_OK),
        PerronStatus::NotPerron => ("false", EXIT_NOT_PERRON),
        PerronStatus::Undecided => ("undecided", EXIT_UNDECIDED),
    }
}

fn check(s: &Setup) -> Result<Outcome, Outcome> {
    let (word, code) = verdict(s.mp.is_perron());
    let set = s.mp.conjugates();
    let body = match s.cfg.format {
        Format::Json => {
            let mut map = header("check", s.text, &s.mp);
            map.insert("perron".into(), json!(word));
            let roots: Vec<Value> = set
                .roots()
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    json!({
                        "j": i + 1,
                        "real": r.is_real(),
                        "re": enclosure(&r.re()),
                        "im": enclosure(&r.im()),
                        "modulus": enclosure(&r.modulus()),
                    })
                })
                .collect();
            map.insert("conjugates".into(), Value::Array(roots));
            render_json(map)
        }
        Format::Csv => {
            let mut t = Table::new(vec!["j", "re", "im", "modulus", "radius", "real"]);
            t.standard_meta("check", s.text, &s.mp);
            t.meta("perron", word);
            for (i, r) in set.roots().iter().enumerate() {
                t.rows.push(vec![
                    (i + 1).to_string(),
                    r.re().mid_decimal(),
                    r.im().mid_decimal(),
                    r.modulus().mid_decimal(),
                    format!("{:e}", r.radius_f64()),
                    r.is_real().to_string(),
                ]);
            }
            t.render()
        }
    };
    Ok(Outcome { body: Some(body), code, message: None })
}

fn truncation_text(t: &Truncation) -> String {
    match t {
        Truncation::MemoryBudget { level, needed, budget } => {
            format!("memory budget at level {level} (needs {needed} bytes, budget {budget})")
        }
        Truncation::CoordinateOverflow { level } => format!("coordinate overflow at level {level}"),
    }
}

fn truncation_json(t: &Option<Truncation>) -> Value {
    match t {
        None => Value::Null,
        Some(Truncation::MemoryBudget { level, needed, budget }) => {
            json!({ "reason": "memory", "level": level, "needed": needed, "budget": budget })
        }
        Some(Truncation::CoordinateOverflow { level }) => json!({ "reason": "coordinates", "level": level }),
    }
}

fn count(s: &Setup) -> Result<Outcome, Outcome> {
    let n = s.n()?;
    let seq = count_sequence_with(&s.mp, n, &s.enumeration());
    let rows = growth_ratios(&seq.counts, &s.mp)?;
    let recurrence = guess_recurrence(&seq.counts);
    let body = match s.cfg.format {
        Format::Json => {
            let mut map = header("count", s.text, &s.mp);
            map.insert("n_max".into(), json!(n));
            let levels: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n,
                        "count": r.count,
                        "ratio": enclosure(&r.ratio),
                        "ratio_over_sqrt_n": enclosure(&r.ratio_over_sqrt_n),
                    })
                })
                .collect();
            map.insert("levels".into(), Value::Array(levels));
            map.insert("truncated".into(), truncation_json(&seq.truncated));
            map.insert(
                "recurrence".into(),
                match &recurrence {
                    None => Value::Null,
                    Some(r) => json!({
                        "conjectural": true,
                        "coefficients": r.coeffs.iter().map(big).collect::<Vec<_>>(),
                        "text": r.to_string(),
                    }),
                },
            );
            render_json(map)
        }
        Format::Csv => {
            let mut t = Table::new(vec!["n", "count", "ratio", "ratio_over_sqrt_n"]);
            t.standard_meta("count", s.text, &s.mp);
            if let Some(tr) = &seq.truncated {
                t.meta("truncated", truncation_text(tr));
            }
            if let Some(r) = &recurrence {
                t.meta("recurrence (conjectural)", r);
            }
            for r in &rows {
                t.rows.push(vec![
                    r.n.to_string(),
                    r.count.to_string(),
                    r.ratio.mid_decimal(),
                    r.ratio_over_sqrt_n.mid_decimal(),
                ]);
            }
            t.render()
        }
    };
    let code = if seq.truncated.is_some() { EXIT_RESOURCE } else { EXIT_OK };
    let message = seq.truncated.as_ref().map(|t| format!("warning: truncated by {}", truncation_text(t)));
    Ok(Outcome { body: Some(body), code, message })
}

fn witness(s: &Setup) -> Result<Outcome, Outcome> {
    s.require_perron()?;
    let mut config = SearchConfig { threads: s.cfg.threads, ..SearchConfig::default() };
    if let Some(cap) = s.cfg.state_cap {
        config.state_cap = cap;
    }
    if let Some(depth) = s.cfg.max_depth {
        config.max_depth = depth;
    }
    let (found, stats, failure) = match find_height_witness_with(&s.mp, &config) {
        Ok((w, stats)) => (Some(w), stats, None),
        Err(Error::SearchExhausted { reason, stats }) => (None, stats, Some(reason)),
        Err(e) => return Err(e.into()),
    };
    let verified = found.as_ref().is_some_and(|w| verify_witness(w, &s.mp));
    let body = match s.cfg.format {
        Format::Json => {
            let mut map = header("witness", s.text, &s.mp);
            map.insert(
                "witness".into(),
                match &found {
                    None => Value::Null,
                    Some(w) => json!({
                        "coefficients": w.coeffs,
                        "length": w.len(),
                        "height": w.height(),
                        "verified": verified,
                    }),
                },
            );
            map.insert(
                "search".into(),
                json!({
                    "depth": stats.depth,
                    "states": stats.states,
                    "pruned": stats.pruned,
                    "peak_frontier": stats.peak_frontier,
                    "max_depth": config.max_depth,
                    "state_cap": config.state_cap,
                    "exhausted": failure,
                }),
            );
            render_json(map)
        }
        Format::Csv => {
            let mut t = Table::new(vec!["k", "c_k"]);
            t.standard_meta("witness", s.text, &s.mp);
            t.meta("search", &stats);
            match &found {
                Some(w) => {
                    t.meta("witness", w);
                    t.meta("verified", verified);
                    for (k, c) in w.coeffs.iter().enumerate() {
                        t.rows.push(vec![(k + 1).to_string(), c.to_string()]);
                    }
                }
                None => t.meta("exhausted", failure.as_deref().unwrap_or("")),
            }
            t.render()
        }
    };
    let (code, message) = match (&found, failure) {
        (Some(_), _) if verified => (EXIT_OK, None),
        (Some(_), _) => (EXIT_INVALID, Some("error: witness failed verification".to_string())),
        (None, reason) => (
            EXIT_RESOURCE,
            Some(format!("error: search exhausted ({}); raise --state-cap or --max-depth", reason.unwrap_or_default())),
        ),
    };
    Ok(Outcome { body: Some(body), code, message })
}

fn gap(s: &Setup) -> Result<Outcome, Outcome> {
    let n = s.n()?;
    let cfg = s.enumeration();
    let mut results = Vec::with_capacity(n);
    let mut level = LevelSet::zero(s.mp.degree());
    let mut stopped = None;
    for _ in 0..n {
        match advance_level_with(&level, &s.mp, &cfg) {
            Ok(next) => level = next,
            Err(e @ (Error::MemoryBudget { .. } | Error::CoordinateOverflow { .. })) => {
                stopped = Some(e);
                break;
            }
            Err(e) => return Err(e.into()),
        }
        results.push(level_gap(&s.mp, &level)?);
    }
    let body = match s.cfg.format {
        Format::Json => {
            let mut map = header("gap", s.text, &s.mp);
            let levels: Vec<Value> = results
                .iter()
                .map(|g| {
                    json!({
                        "n": g.n,
                        "count": g.count,
                        "gap": enclosure(&g.gap),
                        "normalized": enclosure(&g.normalized),
                    })
                })
                .collect();
            map.insert("levels".into(), Value::Array(levels));
            map.insert("truncated".into(), stopped.as_ref().map_or(Value::Null, |e| json!(e.to_string())));
            render_json(map)
        }
        Format::Csv => {
            let mut t = Table::new(vec!["n", "count", "gap_lo", "gap_hi", "normalized_lo", "normalized_hi"]);
            t.standard_meta("gap", s.text, &s.mp);
            if let Some(e) = &stopped {
                t.meta("truncated", e);
            }
            for g in &results {
                t.rows.push(vec![
                    g.n.to_string(),
                    g.count.to_string(),
                    g.gap.lo_decimal(),
                    g.gap.hi_decimal(),
                    g.normalized.lo_decimal(),
                    g.normalized.hi_decimal(),
                ]);
            }
            t.render()
        }
    };
    let code = if stopped.is_some() { EXIT_RESOURCE } else { EXIT_OK };
    Ok(Outcome { body: Some(body), code, message: stopped.map(|e| format!("warning: truncated by {e}")) })
}

fn traces(s: &Setup) -> Result<Outcome, Outcome> {
    let n = s.n()?;
    let traces = newton_traces(&s.mp, n);
    let ratios = trace_ratio(&s.mp, n)?;
    let body = match s.cfg.format {
        Format::Json => {
            let mut map = header("traces", s.text, &s.mp);
            let rows: Vec<Value> = ratios
                .iter()
                .map(|r| json!({ "k": r.k, "trace": big(&r.trace), "ratio": enclosure(&r.ratio) }))
                .collect();
            map.insert("traces".into(), Value::Array(rows));
            render_json(map)
        }
        Format::Csv => {
            let mut t = Table::new(vec!["k", "trace", "ratio"]);
            t.standard_meta("traces", s.text, &s.mp);
            for (r, a) in ratios.iter().zip(&traces.values) {
                t.rows.push(vec![r.k.to_string(), a.to_string(), r.ratio.mid_decimal()]);
            }
            t.render()
        }
    };
    Ok(Outcome::ok(body))
}

fn angular(s: &Setup) -> Result<Outcome, Outcome> {
    let n = s.n()?;
    let j = match s.cfg.conjugate {
        Some(j) => j,
        None => *s
            .mp
            .conjugates()
            .nonreal_indices()
            .first()
            .ok_or_else(|| Outcome::fail(EXIT_INVALID, "every conjugate is real"))?,
    };
    let stats = angular_average(&s.mp, j, n)?;
    let body = match s.cfg.format {
        Format::Json => {
            let mut map = header("angular", s.text, &s.mp);
            map.insert("j".into(), json!(j));
            let rows: Vec<Value> =
                stats.averages.iter().enumerate().map(|(i, a)| json!({ "t": i + 1, "mean": enclosure(a) })).collect();
            map.insert("averages".into(), Value::Array(rows));
            render_json(map)
        }
        Format::Csv => {
            let mut t = Table::new(vec!["t", "mean"]);
            t.standard_meta("angular", s.text, &s.mp);
            t.meta("j", j);
            for (i, a) in stats.averages.iter().enumerate() {
                t.rows.push(vec![(i + 1).to_string(), a.mid_decimal()]);
            }
            t.render()
        }
    };
    Ok(Outcome::ok(body))
}

fn powersum(s: &Setup) -> Result<Outcome, Outcome> {
    let n = s.n()?;
    let j = s.cfg.conjugate.unwrap_or(if s.mp.degree() >= 2 { 2 } else { 1 });
    let rows = real_power_sum(&s.mp, j, n)?;
    let body = match s.cfg.format {
        Format::Json => {
            let mut map = header("powersum", s.text, &s.mp);
            map.insert("j".into(), json!(j));
            let out: Vec<Value> = rows
                .iter()
                .map(|r| json!({ "t": r.t, "sum": enclosure(&r.sum), "normalizer": enclosure(&r.normalizer) }))
                .collect();
            map.insert("sums".into(), Value::Array(out));
            render_json(map)
        }
        Format::Csv => {
            let mut t = Table::new(vec!["t", "sum", "normalizer"]);
            t.standard_meta("powersum", s.text, &s.mp);
            t.meta("j", j);
            for r in &rows {
                t.rows.push(vec![r.t.to_string(), r.sum.mid_decimal(), r.normalizer.mid_decimal()]);
            }
            t.render()
        }
    };
    Ok(Outcome::ok(body))
}

fn expand(s: &Setup) -> Result<Outcome, Outcome> {
    let n = s.n()?;
    let (kind, x, word) = match &s.cfg.x {
        Some(text) => {
            let x: QThetaNumber = text.parse()?;
            let word = greedy_digits(&s.mp, &x, n)?;
            ("greedy", Some(x), word)
        }
        None => ("quasi-greedy-one", None, quasi_greedy_one(&s.mp, n)?),
    };
    let body = match s.cfg.format {
        Format::Json => {
            let mut map = header("expand", s.text, &s.mp);
            map.insert("kind".into(), json!(kind));
            map.insert("x".into(), x.as_ref().map_or(Value::Null, |x| json!(x.to_string())));
            map.insert("word".into(), json!(word.to_string()));
            map.insert("digits".into(), json!(word.digits));
            render_json(map)
        }
        Format::Csv => {
            let mut t = Table::new(vec!["kind", "x", "n", "word"]);
            t.standard_meta("expand", s.text, &s.mp);
            t.rows.push(vec![
                kind.to_string(),
                x.map(|x| x.to_string()).unwrap_or_default(),
                n.to_string(),
                word.to_string(),
            ]);
            t.render()
        }
    };
    Ok(Outcome::ok(body))
}

fn admissible(s: &Setup) -> Result<Outcome, Outcome> {
    let n = s.n()?;
    let e = quasi_greedy_one(&s.mp, n)?;
    let admissible = admissible_counts_for(&e.digits, s.mp.floor_theta(), n);
    let seq = count_sequence_with(&s.mp, n, &s.enumeration());
    let k = seq.counts.len();
    let rows = lower_bound_rows(&s.mp, &admissible[..k], &seq.counts)?;
    let body = match s.cfg.format {
        Format::Json => {
            let mut map = header("admissible", s.text, &s.mp);
            map.insert("quasi_greedy_one".into(), json!(e.to_string()));
            let mut out: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n,
                        "admissible": int(&r.admissible),
                        "count": r.count,
                        "holds": r.holds,
                        "ratio": enclosure(&r.ratio),
                    })
                })
                .collect();
            for (i, a) in admissible.iter().enumerate().skip(k) {
                out.push(json!({ "n": i + 1, "admissible": int(a), "count": null, "holds": null, "ratio": null }));
            }
            map.insert("levels".into(), Value::Array(out));
            map.insert("truncated".into(), truncation_json(&seq.truncated));
            render_json(map)
        }
        Format::Csv => {
            let mut t = Table::new(vec!["n", "admissible", "count", "holds", "ratio"]);
            t.standard_meta("admissible", s.text, &s.mp);
            t.meta("quasi_greedy_one", &e);
            if let Some(tr) = &seq.truncated {
                t.meta("truncated", truncation_text(tr));
            }
            for r in &rows {
                t.rows.push(vec![
                    r.n.to_string(),
                    r.admissible.to_string(),
                    r.count.to_string(),
                    r.holds.to_string(),
                    r.ratio.mid_decimal(),
                ]);
            }
            for (i, a) in admissible.iter().enumerate().skip(k) {
                t.rows.push(vec![(i + 1).to_string(), a.to_string(), String::new(), String::new(), String::new()]);
            }
            t.render()
        }
    };
    let code = if seq.truncated.is_some() { EXIT_RESOURCE } else { EXIT_OK };
    Ok(Outcome { body: Some(body), code, message: None })
}
