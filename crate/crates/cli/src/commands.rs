use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::Path;

use critexp::construction::{self, PredictedWitness, Schedule};
use critexp::repetition::{self, RunRecord};
use critexp::verification::{self, CheckReport};
use critexp::{Error, Rational, Word};
use serde::Serialize;

use crate::args::{AnalyzeArgs, BetasArgs, Format, GenerateArgs, VerifyArgs};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_SIZE: u8 = 3;

pub fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Size(_) => EXIT_SIZE,
        _ => EXIT_USAGE,
    }
}

fn write_json(path: &Path, value: &impl Serialize) -> critexp::Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn print(text: &str) -> critexp::Result<()> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct ScheduleRow {
    level: usize,
    r: u64,
    s: u32,
    t: u64,
    beta_num: i64,
    beta_den: i64,
}

fn schedule_rows(schedule: &Schedule) -> Vec<ScheduleRow> {
    schedule
        .params()
        .iter()
        .enumerate()
        .map(|(i, p)| ScheduleRow {
            level: i + 1,
            r: p.r(),
            s: p.s(),
            t: p.t(),
            beta_num: p.beta().numer(),
            beta_den: p.beta().denom(),
        })
        .collect()
}

#[derive(Serialize)]
struct GenerateReport {
    alpha: Rational,
    length: u64,
    schedule: Vec<ScheduleRow>,
    witnesses: Vec<PredictedWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    word: Option<String>,
}

pub fn generate(args: &GenerateArgs) -> critexp::Result<u8> {
    let alpha = args.alpha;
    let (schedule, word) = if let Some(path) = &args.schedule {
        let schedule = Schedule::from_table(&fs::read_to_string(path)?)?;
        if schedule.target_alpha() != alpha {
            return Err(Error::Precondition(format!(
                "schedule is for alpha = {}, not {alpha}",
                schedule.target_alpha()
            )));
        }
        let (w, _) = construction::build_word_within(&schedule, args.budget)?;
        (schedule, w)
    } else if let Some(target) = args.target_len {
        let schedule = construction::schedule_covering(alpha, target)?;
        let w = construction::word_prefix_within(alpha, target, args.budget)?;
        (schedule, w)
    } else {
        let levels = args.levels.unwrap_or(3);
        if levels == 0 {
            return Err(Error::Precondition("--levels must be at least 1".into()));
        }
        let schedule = construction::build_schedule(alpha, levels, Some(args.s_start))?;
        let (w, _) = construction::build_word_within(&schedule, args.budget)?;
        (schedule, w)
    };
    let witnesses = construction::predicted_witnesses(&schedule)?;

    if let Some(out) = &args.out {
        match args.format {
            Format::Text => fs::write(out, format!("{word}\n"))?,
            Format::Packed => fs::write(out, word.to_packed())?,
            Format::Report => write_json(
                out,
                &GenerateReport {
                    alpha,
                    length: word.len(),
                    schedule: schedule_rows(&schedule),
                    witnesses: witnesses.clone(),
                    word: Some(word.to_string()),
                },
            )?,
        }
    }
    if let Some(path) = &args.report {
        write_json(
            path,
            &GenerateReport {
                alpha,
                length: word.len(),
                schedule: schedule_rows(&schedule),
                witnesses: witnesses.clone(),
                word: None,
            },
        )?;
    }

    // Comment lines keep stdout readable by `--schedule`.
    let mut text = schedule.to_table();
    for w in &witnesses {
        let _ = writeln!(
            text,
            "# witness level {}: period {}, min length {}, beta {}",
            w.level, w.period, w.min_length, w.beta
        );
    }
    let _ = writeln!(text, "# length {}", word.len());
    print(&text)?;
    Ok(EXIT_OK)
}

fn read_word(path: &Path, format: Format) -> critexp::Result<Word> {
    let bytes = fs::read(path)?;
    match format {
        Format::Text => Word::from_text(&bytes),
        Format::Packed => Word::from_packed(&bytes),
        Format::Report => Err(Error::Precondition("analyze reads text or packed words".into())),
    }
}

fn describe(r: &RunRecord) -> String {
    format!("start={} period={} length={} exponent={}", r.start, r.period, r.length, r.exponent)
}

pub fn analyze(args: &AnalyzeArgs) -> critexp::Result<u8> {
    let word = read_word(&args.input, args.format)?;
    let report = repetition::analyze(&word, args.alpha)?;

    let mut text = String::new();
    let _ = writeln!(text, "length: {}", report.length);
    let _ = writeln!(text, "runs: {}", report.runs.len());
    match (&report.max_exponent, &report.max_exponent_run) {
        (Some(e), Some(r)) => {
            let _ = writeln!(text, "max exponent: {e} ({})", describe(r));
        }
        _ => text.push_str("max exponent: none\n"),
    }
    if let (Some(alpha), Some(verdict)) = (&report.alpha, &report.verdict) {
        let _ = writeln!(text, "alpha: {alpha}");
        let _ = writeln!(text, "verdict: {verdict}");
        if let Some(w) = &report.witness {
            let _ = writeln!(text, "witness: {}", describe(w));
        }
    }
    if args.list_runs {
        for r in &report.runs {
            let _ = writeln!(text, "{} {} {} {}", r.start, r.period, r.length, r.exponent);
        }
    }
    print(&text)?;
    if let Some(path) = &args.report {
        write_json(path, &report)?;
    }
    Ok(if report.is_violation() { EXIT_FAILED } else { EXIT_OK })
}

#[derive(Serialize)]
struct BetaRow {
    s: u32,
    t: Option<u64>,
    beta: Option<Rational>,
    alpha_minus_beta: Option<Rational>,
    bound: Rational,
}

pub fn betas(args: &BetasArgs) -> critexp::Result<u8> {
    let alpha = args.alpha;
    if args.s_min < 3 || args.s_min > args.s_max || args.s_max > construction::MAX_S {
        return Err(Error::Precondition(format!(
            "need 3 <= s-min <= s-max <= {}, got {}..{}",
            construction::MAX_S,
            args.s_min,
            args.s_max
        )));
    }
    let mut rows = Vec::new();
    let mut text = format!("# alpha {alpha} (r = {})\n", alpha.ceil());
    let _ = writeln!(text, "{:>3} {:>12} {:>24} {:>14} {:>24} {:>24}", "s", "t", "beta", "decimal", "alpha-beta", "7/2^s");
    for s in args.s_min..=args.s_max {
        let bound = Rational::new(7, 1i64 << s);
        let found = construction::find_obtainable(alpha, s)?;
        match found {
            Some(p) => {
                let gap = alpha
                    .checked_sub(&p.beta())
                    .ok_or_else(|| Error::Size("alpha - beta overflows".into()))?;
                let _ = writeln!(
                    text,
                    "{:>3} {:>12} {:>24} {:>14} {:>24} {:>24}",
                    s,
                    p.t(),
                    p.beta().to_string(),
                    p.beta().to_decimal(10),
                    gap.to_string(),
                    bound.to_string()
                );
                rows.push(BetaRow { s, t: Some(p.t()), beta: Some(p.beta()), alpha_minus_beta: Some(gap), bound });
            }
            None => {
                let _ = writeln!(text, "{s:>3} {:>12}", "none");
                rows.push(BetaRow { s, t: None, beta: None, alpha_minus_beta: None, bound });
            }
        }
    }
    print(&text)?;
    if let Some(path) = &args.report {
        write_json(path, &rows)?;
    }
    Ok(EXIT_OK)
}

pub fn verify(args: &VerifyArgs) -> critexp::Result<u8> {
    let alpha = args.alpha;
    let seed = args.seed;
    if args.levels == 0 || args.s_max == 0 {
        return Err(Error::Precondition("--levels and --s-max must be at least 1".into()));
    }
    let schedule = construction::build_schedule(alpha, args.levels, None)?;
    let mut reports: Vec<CheckReport> = vec![
        verification::check_lemma1(args.s_max)?,
        verification::check_theorem2(1000, 14, alpha, seed)?,
        verification::check_theorem3(10_000, 64, seed)?,
        verification::check_lemma4(alpha, 1000, 128, seed)?,
    ];
    for p in schedule.params() {
        reports.push(verification::check_lemma5(p, alpha, 200, seed)?);
    }
    reports.push(verification::verify_construction_within(alpha, args.levels, args.budget)?);

    let mut text = String::new();
    for r in &reports {
        text.push_str(&r.to_string());
    }
    let all = reports.iter().all(CheckReport::passed);
    let _ = writeln!(text, "{}", if all { "all checks passed" } else { "some checks FAILED" });
    print(&text)?;
    if let Some(path) = &args.report {
        write_json(path, &reports)?;
    }
    Ok(if all { EXIT_OK } else { EXIT_FAILED })
}
