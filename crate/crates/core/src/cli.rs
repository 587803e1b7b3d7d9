//! Command-line front end.
//!
//! Exit codes: 0 pass, 1 property violated, 2 input error, 3 precondition
//! error. Reports go to standard output, diagnostics to standard error.

use std::ffi::OsString;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::braid::BraidWord;
use crate::error::Error;
use crate::gassner::{
    d_matrix, gassner_annotated, verify_unitarity, verify_vw_unitarity, vw_gassner,
    vw_gassner_prime, UnitarityReport, VwWord,
};
use crate::numeric::{
    check_psi_prime_unitarity, check_psi_unitarity, is_positive_definite, psi_numeric,
    psi_prime_numeric, TorusPoint, HERMITIAN_TOL, PIVOT_FLOOR, UNITARITY_TOL,
};
use crate::selftest::{self, SelftestConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "gassner", version, about = "Gassner invariant of braids: compute, verify, sweep")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print Γ(b), the induced permutation and the over-strand labels.
    Compute(WordArgs),
    /// Check Ω(τ)γ⁻¹ = γ̄ᵀΩ(ι) exactly.
    Verify(WordArgs),
    /// Check the same identity for a v/w word (letters `i,j` or `-i,j`).
    VerifyVw(WordArgs),
    /// Randomized sweep over all exact identities.
    Selftest(SelftestArgs),
    /// Hermitian form Ψ, its positivity, and numerical Ψ-unitarity.
    Numeric(NumericArgs),
}

#[derive(Args, Debug)]
struct WordArgs {
    /// Number of strands.
    #[arg(short = 'n', long = "strands")]
    strands: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Word text, e.g. "1 -3 2" (empty for the trivial braid).
    #[arg(allow_hyphen_values = true, default_value = "")]
    word: String,
}

#[derive(Args, Debug)]
struct SelftestArgs {
    #[arg(long, default_value_t = 5)]
    max_n: usize,
    #[arg(long, default_value_t = 20)]
    max_len: usize,
    #[arg(long, default_value_t = 500)]
    cases: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct NumericArgs {
    #[arg(short = 'n', long = "strands")]
    strands: usize,
    /// Angles θ_k with t_k = exp(iθ_k), comma separated.
    #[arg(long, allow_hyphen_values = true)]
    theta: String,
    /// Bound on the relative unitarity residual.
    #[arg(long, default_value_t = UNITARITY_TOL)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(allow_hyphen_values = true, default_value = "")]
    word: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Pretty,
}

/// What a command produced: exit code plus the text for each stream.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn input_error(message: impl std::fmt::Display) -> Self {
        Outcome {
            code: EXIT_INPUT,
            stderr: format!("error: {message}\n"),
            ..Default::default()
        }
    }

    fn precondition(message: impl std::fmt::Display) -> Self {
        Outcome {
            code: EXIT_PRECONDITION,
            stderr: format!("error: {message}\n"),
            ..Default::default()
        }
    }
}

#[derive(Serialize)]
struct RunReport {
    command: &'static str,
    inputs: Value,
    outcome: &'static str,
    result: Value,
    elapsed_ms: f64,
}

impl RunReport {
    fn render(&self, format: Format, pretty_body: String) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("serializable report");
                s.push('\n');
                s
            }
            Format::Pretty => format!(
                "{}: {}\n{}elapsed: {:.3} ms\n",
                self.command, self.outcome, pretty_body, self.elapsed_ms
            ),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_INPUT,
                    stderr: text,
                    ..Default::default()
                }
            } else {
                Outcome {
                    code: EXIT_PASS,
                    stdout: text,
                    ..Default::default()
                }
            };
        }
    };
    match cli.command {
        Command::Compute(a) => compute(&a),
        Command::Verify(a) => verify(&a),
        Command::VerifyVw(a) => verify_vw(&a),
        Command::Selftest(a) => selftest_cmd(&a),
        Command::Numeric(a) => numeric_cmd(&a),
    }
}

fn parse_word(strands: usize, text: &str) -> Result<BraidWord, Outcome> {
    BraidWord::parse(text, strands).map_err(Outcome::input_error)
}

fn compute(a: &WordArgs) -> Outcome {
    let start = Instant::now();
    let word = match parse_word(a.strands, &a.word) {
        Ok(w) => w,
        Err(o) => return o,
    };
    let annotated = word.annotate();
    let gamma = gassner_annotated(&annotated);
    let report = RunReport {
        command: "compute",
        inputs: json!({ "n": a.strands, "word": word.to_string() }),
        outcome: "value",
        result: json!({
            "tau": annotated.tau.image(),
            "over": annotated.over,
            "matrix": gamma.to_json(),
        }),
        elapsed_ms: elapsed(start),
    };
    let body = format!(
        "word: {}\ntau: {}\nover: {:?}\n{}",
        word, annotated.tau, annotated.over, gamma
    );
    Outcome {
        code: EXIT_PASS,
        stdout: report.render(a.format, body),
        ..Default::default()
    }
}

fn unitarity_json(r: &UnitarityReport) -> Value {
    let diff = r.first_difference().map(|(row, col)| {
        json!({
            "row": row + 1,
            "col": col + 1,
            "lhs": r.lhs.get(row, col).to_string(),
            "rhs": r.rhs.get(row, col).to_string(),
        })
    });
    json!({
        "holds": r.holds,
        "lhs": r.lhs.to_json(),
        "rhs": r.rhs.to_json(),
        "first_difference": diff,
    })
}

fn unitarity_outcome(
    command: &'static str,
    inputs: Value,
    mut result: Value,
    r: &UnitarityReport,
    format: Format,
    start: Instant,
) -> Outcome {
    let base = unitarity_json(r);
    if let (Value::Object(out), Value::Object(extra)) = (&mut result, base) {
        for (k, v) in extra {
            out.entry(k).or_insert(v);
        }
    }
    let report = RunReport {
        command,
        inputs,
        outcome: if r.holds { "pass" } else { "fail" },
        result,
        elapsed_ms: elapsed(start),
    };
    let mut body = format!("holds: {}\n", r.holds);
    let mut stderr = String::new();
    if let Some((row, col)) = r.first_difference() {
        let line = format!(
            "first differing entry ({}, {}): lhs = {}, rhs = {}\n",
            row + 1,
            col + 1,
            r.lhs.get(row, col),
            r.rhs.get(row, col)
        );
        body.push_str(&line);
        stderr = line;
    }
    Outcome {
        code: if r.holds { EXIT_PASS } else { EXIT_VIOLATED },
        stdout: report.render(format, body),
        stderr,
    }
}

fn verify(a: &WordArgs) -> Outcome {
    let start = Instant::now();
    let word = match parse_word(a.strands, &a.word) {
        Ok(w) => w,
        Err(o) => return o,
    };
    let r = verify_unitarity(&word);
    unitarity_outcome(
        "verify",
        json!({ "n": a.strands, "word": word.to_string() }),
        json!({ "tau": word.permutation().image() }),
        &r,
        a.format,
        start,
    )
}

fn verify_vw(a: &WordArgs) -> Outcome {
    let start = Instant::now();
    let word = match VwWord::parse(&a.word, a.strands) {
        Ok(w) => w,
        Err(e) => return Outcome::input_error(e),
    };
    let r = verify_vw_unitarity(&word);
    let d = d_matrix(a.strands);
    let conjugacy = d.checked_mul(&vw_gassner_prime(&word)).expect("same shape")
        == vw_gassner(&word).checked_mul(&d).expect("same shape");
    unitarity_outcome(
        "verify-vw",
        json!({ "n": a.strands, "word": word.to_string() }),
        json!({
            "gamma": vw_gassner(&word).to_json(),
            "gamma_prime": vw_gassner_prime(&word).to_json(),
            "conjugacy_holds": conjugacy,
        }),
        &r,
        a.format,
        start,
    )
}

fn selftest_cmd(a: &SelftestArgs) -> Outcome {
    let start = Instant::now();
    let config = SelftestConfig {
        max_n: a.max_n,
        max_len: a.max_len,
        cases: a.cases,
        seed: a.seed,
    };
    let report = match selftest::run(&config) {
        Ok(r) => r,
        Err(e) => return Outcome::input_error(e),
    };
    let passed = report.passed();
    let mut body = format!(
        "seed {} | cases {} | max-n {} | max-len {}\n",
        a.seed, a.cases, a.max_n, a.max_len
    );
    for (name, t) in &report.tallies {
        body.push_str(&format!("{name:<18} passed {:>5}  failed {:>5}\n", t.passed, t.failed));
    }
    for f in &report.failures {
        body.push_str(&format!(
            "FAIL case {} {} n={} {}\n",
            f.case,
            f.property.name(),
            f.strands,
            f.input
        ));
    }
    let run_report = RunReport {
        command: "selftest",
        inputs: serde_json::to_value(config).expect("serializable config"),
        outcome: if passed { "pass" } else { "fail" },
        result: json!({ "tallies": report.tallies, "failures": report.failures }),
        elapsed_ms: elapsed(start),
    };
    Outcome {
        code: if passed { EXIT_PASS } else { EXIT_VIOLATED },
        stdout: run_report.render(a.format, body),
        ..Default::default()
    }
}

fn numeric_cmd(a: &NumericArgs) -> Outcome {
    let start = Instant::now();
    let word = match parse_word(a.strands, &a.word) {
        Ok(w) => w,
        Err(o) => return o,
    };
    let thetas = match a
        .theta
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
    {
        Ok(t) => t,
        Err(e) => return Outcome::input_error(format!("bad --theta value: {e}")),
    };
    if thetas.len() != a.strands {
        return Outcome::input_error(format!(
            "--theta has {} angles but the braid has {} strands",
            thetas.len(),
            a.strands
        ));
    }
    let point = match TorusPoint::new(thetas) {
        Ok(p) => p,
        Err(e) => return Outcome::input_error(e),
    };
    if !(a.tol.is_finite() && a.tol >= 0.0) {
        return Outcome::input_error("--tol must be a nonnegative number");
    }
    let computed = (|| -> Result<Value, Error> {
        let psi = psi_numeric(&point)?;
        let psi_prime = psi_prime_numeric(&point)?;
        let residual = check_psi_unitarity(&word, &point)?;
        let residual_prime = check_psi_prime_unitarity(&word, &point)?;
        Ok(json!({
            "psi": {
                "hermitian_defect": psi.hermitian_defect(),
                "positive_definite": is_positive_definite(&psi, PIVOT_FLOOR)?,
                "unitarity_residual": residual,
            },
            "psi_prime": {
                "hermitian_defect": psi_prime.hermitian_defect(),
                "positive_definite": is_positive_definite(&psi_prime, PIVOT_FLOOR)?,
                "unitarity_residual": residual_prime,
            },
        }))
    })();
    let result = match computed {
        Ok(v) => v,
        Err(e @ (Error::NotPure(_) | Error::NearPole { .. })) => return Outcome::precondition(e),
        Err(e) => return Outcome::input_error(e),
    };
    let field = |form: &str, key: &str| result[form][key].as_f64().unwrap_or(f64::NAN);
    let ok = ["psi", "psi_prime"].iter().all(|form| {
        field(form, "hermitian_defect") <= HERMITIAN_TOL && field(form, "unitarity_residual") <= a.tol
    });
    let mut body = String::new();
    for form in ["psi", "psi_prime"] {
        body.push_str(&format!(
            "{form}: hermitian defect {:.3e}, positive definite {}, unitarity residual {:.3e}\n",
            field(form, "hermitian_defect"),
            result[form]["positive_definite"],
            field(form, "unitarity_residual"),
        ));
    }
    let report = RunReport {
        command: "numeric",
        inputs: json!({
            "n": a.strands,
            "word": word.to_string(),
            "theta": point.thetas(),
            "tol": a.tol,
        }),
        outcome: if ok { "pass" } else { "fail" },
        result,
        elapsed_ms: elapsed(start),
    };
    Outcome {
        code: if ok { EXIT_PASS } else { EXIT_VIOLATED },
        stdout: report.render(a.format, body),
        ..Default::default()
    }
}

fn elapsed(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("gassner").chain(args.iter().copied()))
    }

    #[test]
    fn compute_identity() {
        let o = run_args(&["compute", "-n", "3", ""]);
        assert_eq!(o.code, EXIT_PASS);
        let v: Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["result"]["matrix"]["entries"][1][1], "1");
        assert_eq!(v["result"]["matrix"]["entries"][0][1], "0");
        assert_eq!(v["result"]["tau"], json!([1, 2, 3]));
    }

    #[test]
    fn flags_may_follow_the_word() {
        let a = run_args(&["compute", "-n", "4", "-1 -3 2", "--format", "json"]);
        let b = run_args(&["compute", "--format", "json", "-n", "4", "-1 -3 2"]);
        assert_eq!(a.code, EXIT_PASS);
        let strip = |s: &str| {
            let mut v: Value = serde_json::from_str(s).unwrap();
            v["elapsed_ms"] = Value::Null;
            v
        };
        assert_eq!(strip(&a.stdout), strip(&b.stdout));
    }

    #[test]
    fn bad_token_exits_two() {
        let o = run_args(&["compute", "-n", "4", "5"]);
        assert_eq!(o.code, EXIT_INPUT);
        assert!(o.stderr.contains("\"5\""), "{}", o.stderr);
        assert!(o.stdout.is_empty());
    }

    #[test]
    fn pretty_format() {
        let o = run_args(&["compute", "-n", "2", "--format", "pretty", "1"]);
        assert_eq!(o.code, EXIT_PASS);
        assert!(o.stdout.starts_with("compute: value\n"));
        assert!(o.stdout.contains("tau: [2,1]"));
        assert!(o.stdout.contains("1 - t1"));
    }

    #[test]
    fn numeric_near_pole_exits_three() {
        let o = run_args(&["numeric", "-n", "2", "--theta", "0,0.1", "1 1"]);
        assert_eq!(o.code, EXIT_PRECONDITION);
    }

    #[test]
    fn numeric_theta_count_mismatch_exits_two() {
        let o = run_args(&["numeric", "-n", "2", "--theta", "0.1", "1 1"]);
        assert_eq!(o.code, EXIT_INPUT);
    }

    #[test]
    fn help_exits_zero() {
        let o = run_args(&["--help"]);
        assert_eq!(o.code, EXIT_PASS);
        assert!(o.stdout.contains("selftest"));
    }
}
