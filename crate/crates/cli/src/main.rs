//! `oscillator`: canonical DFT eigenbases, oscillator transforms and
//! multiplicity tables over prime fields.

mod io;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use oscillator_core::field::{odd_primes_in, DEFAULT_DENSE_CAP};
use oscillator_core::oscillator::{
    dot_transform, full_analysis, full_synthesis, CoefficientVector, FastOscillator,
};
use oscillator_core::spectral::{
    dft_eigenvalue, dft_multiplicities, eigenbasis, rho_w_multiplicities, PHASE_CONVENTION,
};
use oscillator_core::tori::{torus, MaximalTorus, TorusKind};
use oscillator_core::verify::{self, Suite, VerifyOptions};
use oscillator_core::PrimeField;

use io::{CoefficientFile, CoefficientOutput, VectorFile};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] oscillator_core::Error),
}

#[derive(Parser, Debug)]
#[command(name = "oscillator", version, about = "Canonical DFT eigenbases and oscillator transforms over F_p")]
struct Cli {
    /// Largest p accepted by operations that build p x p matrices.
    #[arg(long, global = true, default_value_t = DEFAULT_DENSE_CAP)]
    dense_cap: u64,

    /// Seed for randomized checks and benchmark inputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TorusArg {
    #[value(name = "Tw")]
    Tw,
    #[value(name = "A")]
    A,
    #[value(name = "ns")]
    Ns,
}

impl TorusArg {
    fn kind(self) -> TorusKind {
        match self {
            TorusArg::Tw => TorusKind::WeylCentralizer,
            TorusArg::A => TorusKind::Standard,
            TorusArg::Ns => TorusKind::NonSplit,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Dot,
    Full,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the eigenbasis of a torus (one vector per column) and its metadata.
    Eigenbasis {
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value = "Tw")]
        torus: TorusArg,
        /// Matrix file; metadata goes to `<output>.meta.csv`.
        #[arg(long)]
        output: PathBuf,
    },
    /// Oscillator transform of a vector file, or synthesis from full coefficients.
    Transform {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "Tw")]
        torus: TorusArg,
        #[arg(long, value_enum, default_value = "dot")]
        mode: Mode,
        /// Expected modulus; must match the input file.
        #[arg(long)]
        p: Option<u64>,
        /// Treat the input as a full coefficient file and write the synthesized vector.
        #[arg(long)]
        synthesize: bool,
        #[arg(long)]
        output: PathBuf,
    },
    /// Fast oscillator transform for p = 1 mod 4.
    Fot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        output: PathBuf,
    },
    /// CSV of the multiplicities of rho(w) and of the DFT for every prime in a range.
    Multiplicities {
        #[arg(long, default_value_t = 3)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run verification suites over a range of primes.
    Verify {
        #[arg(long, default_value_t = 3)]
        from: u64,
        #[arg(long)]
        to: u64,
        /// Comma-separated suites (heisenberg, weil, dft, tori, spectral, multiplicities, oscillator).
        #[arg(long, value_delimiter = ',')]
        suite: Vec<Suite>,
        #[arg(long, hide = true)]
        perturb_rho_w: Option<f64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Time the fast transform and, below the dense cap, the dense transform.
    Bench {
        /// Comma-separated primes.
        #[arg(long = "p", value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// Structured `key: value` report printed to stdout.
#[derive(Default)]
struct Report {
    lines: Vec<(String, String)>,
}

impl Report {
    fn new(command: &str) -> Self {
        let mut r = Report::default();
        r.add("command", command);
        r
    }

    fn add(&mut self, key: &str, value: impl ToString) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    fn timing(&mut self, key: &str, start: Instant) {
        self.add(&format!("timing.{key}_ms"), format!("{:.3}", start.elapsed().as_secs_f64() * 1e3));
    }

    fn render(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.lines {
            let _ = writeln!(s, "{k}: {v}");
        }
        s
    }
}

fn field(p: u64, cap: u64) -> Result<PrimeField, CliError> {
    Ok(PrimeField::new(p)?.with_dense_cap(cap))
}

fn torus_name(kind: TorusKind) -> String {
    kind.to_string()
}

fn cmd_eigenbasis(p: u64, t: TorusArg, output: &Path, cap: u64) -> Result<Report, CliError> {
    let mut report = Report::new("eigenbasis");
    let f = field(p, cap)?;
    f.require_dense()?;
    let start = Instant::now();
    let tor = torus(&f, t.kind());
    let basis = eigenbasis(&tor)?;
    report.timing("eigenbasis", start);

    let columns: Vec<Vec<Complex64>> = basis.vectors().map(|v| v.as_slice().to_vec()).collect();
    io::write_text(output, &io::matrix_json(p, &columns))?;

    let meta_path = meta_path(output);
    let mut meta = String::new();
    let _ = writeln!(meta, "# torus: {}", torus_name(tor.kind()));
    let _ = writeln!(meta, "# generator: {}", tor.generator());
    let _ = writeln!(meta, "# order: {}", tor.order());
    let _ = writeln!(meta, "# quadratic character: {}", tor.quadratic_character().index());
    let _ = writeln!(meta, "# phase convention: {PHASE_CONVENTION}");
    let is_tw = tor.kind() == TorusKind::WeylCentralizer;
    meta.push_str("column,character,slot,chi_gen_re,chi_gen_im,dim");
    if is_tw {
        meta.push_str(",dft_eigenvalue_re,dft_eigenvalue_im");
    }
    meta.push('\n');
    for (col, label) in basis.labels().iter().enumerate() {
        let chi = tor.character_value(label.character, 1);
        let _ = write!(
            meta,
            "{col},{},{},{},{},{}",
            label.character,
            label.slot,
            io::num(chi.re),
            io::num(chi.im),
            basis.dims()[label.character]
        );
        if is_tw {
            let mu = dft_eigenvalue(&tor, label.character).expect("w lies in T_w");
            let _ = write!(meta, ",{},{}", io::num(mu.re), io::num(mu.im));
        }
        meta.push('\n');
    }
    io::write_text(&meta_path, &meta)?;

    report.add("p", p);
    report.add("torus", torus_name(tor.kind()));
    report.add("generator", tor.generator());
    report.add("vectors", basis.len());
    report.add("support", basis.support().len());
    let dims: Vec<String> = basis.dims().iter().map(|d| d.to_string()).collect();
    report.add("dims", dims.join(","));
    report.add("output", output.display());
    report.add("metadata", meta_path.display());
    Ok(report)
}

fn meta_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".meta.csv");
    PathBuf::from(s)
}

fn check_p(flag: Option<u64>, file_p: u64) -> Result<(), CliError> {
    match flag {
        Some(p) if p != file_p => Err(CliError::Usage(format!(
            "--p {p} does not match p = {file_p} in the input file"
        ))),
        _ => Ok(()),
    }
}

fn write_coefficients(
    output: &Path,
    tor: &MaximalTorus,
    mode: &str,
    c: &CoefficientVector,
) -> Result<(), CliError> {
    let text = io::coefficient_json(&CoefficientOutput {
        p: tor.field().p(),
        torus: &torus_name(tor.kind()),
        mode,
        generator: tor.generator().to_string(),
        labels: &c.labels,
        values: &c.values,
    });
    io::write_text(output, &text)
}

fn cmd_transform(
    input: &Path,
    t: TorusArg,
    mode: Mode,
    p_flag: Option<u64>,
    synthesize: bool,
    output: &Path,
    cap: u64,
) -> Result<Report, CliError> {
    let mut report = Report::new("transform");
    if synthesize {
        let c = CoefficientFile::read(input)?;
        check_p(p_flag, c.p)?;
        if c.mode != "full" {
            return Err(CliError::Parse(format!(
                "{}: field `mode`: synthesis needs a full coefficient file, found \"{}\"",
                input.display(),
                c.mode
            )));
        }
        let f = field(c.p, cap)?;
        let kind = match c.torus.as_str() {
            "Tw" => TorusKind::WeylCentralizer,
            "A" => TorusKind::Standard,
            "ns" => TorusKind::NonSplit,
            other => {
                return Err(CliError::Parse(format!(
                    "{}: field `torus`: unknown torus \"{other}\"",
                    input.display()
                )))
            }
        };
        f.require_dense()?;
        let start = Instant::now();
        let basis = eigenbasis(&torus(&f, kind))?;
        let coeffs = CoefficientVector {
            labels: c.labels(),
            values: c.values(),
        };
        let v = full_synthesis(&basis, &coeffs)?;
        report.timing("synthesis", start);
        io::write_text(output, &io::vector_json(c.p, v.as_slice()))?;
        report.add("p", c.p);
        report.add("torus", c.torus);
        report.add("mode", "synthesize");
        report.add("output", output.display());
        return Ok(report);
    }

    let v = VectorFile::read(input)?;
    check_p(p_flag, v.p)?;
    let f = field(v.p, cap)?;
    f.require_dense()?;
    let start = Instant::now();
    let tor = torus(&f, t.kind());
    let basis = eigenbasis(&tor)?;
    report.timing("eigenbasis", start);
    let start = Instant::now();
    let (name, c) = match mode {
        Mode::Dot => ("dot", dot_transform(&basis, &v.values())?),
        Mode::Full => ("full", full_analysis(&basis, &v.values())?),
    };
    report.timing("transform", start);
    write_coefficients(output, &tor, name, &c)?;
    report.add("p", v.p);
    report.add("torus", torus_name(tor.kind()));
    report.add("mode", name);
    report.add("coefficients", c.len());
    report.add("output", output.display());
    Ok(report)
}

fn cmd_fot(input: &Path, p_flag: Option<u64>, output: &Path) -> Result<Report, CliError> {
    let mut report = Report::new("fot");
    let v = VectorFile::read(input)?;
    check_p(p_flag, v.p)?;
    let f = PrimeField::new(v.p)?;
    if v.p % 4 != 1 {
        return Err(CliError::Usage(format!(
            "p = {} is 3 mod 4, so T_w is non-split; a fast transform for the non-split torus \
             is an open problem. Use `oscillator transform --torus Tw --mode dot` instead",
            v.p
        )));
    }
    let start = Instant::now();
    let fast = FastOscillator::new(&f)?;
    report.timing("plan", start);
    let start = Instant::now();
    let c = fast.transform(&v.values())?;
    report.timing("transform", start);
    let tor_gen = oscillator_core::tori::weyl_centralizer_generator(&f);
    let text = io::coefficient_json(&CoefficientOutput {
        p: v.p,
        torus: "Tw",
        mode: "fot",
        generator: tor_gen.to_string(),
        labels: &c.labels,
        values: &c.values,
    });
    io::write_text(output, &text)?;
    report.add("p", v.p);
    report.add("coefficients", c.len());
    report.add("output", output.display());
    Ok(report)
}

fn multiplicity_csv(from: u64, to: u64) -> Result<String, CliError> {
    let mut s = String::from("p,p_mod_8,m_1,m_minus1,m_i,m_minus_i,n_1,n_minus1,n_i,n_minus_i\n");
    for p in odd_primes_in(from, to) {
        let f = PrimeField::new(p)?;
        let m = rho_w_multiplicities(&f)?.as_array();
        let n = dft_multiplicities(&f)?.as_array();
        let _ = writeln!(
            s,
            "{p},{},{},{},{},{},{},{},{},{}",
            p % 8,
            m[0],
            m[1],
            m[2],
            m[3],
            n[0],
            n[1],
            n[2],
            n[3]
        );
    }
    Ok(s)
}

fn cmd_multiplicities(from: u64, to: u64, output: Option<&Path>) -> Result<(Report, String), CliError> {
    let mut report = Report::new("multiplicities");
    let start = Instant::now();
    let csv = multiplicity_csv(from, to)?;
    report.timing("tables", start);
    report.add("range", format!("{from}..={to}"));
    report.add("rows", csv.lines().count() - 1);
    if let Some(path) = output {
        io::write_text(path, &csv)?;
        report.add("output", path.display());
        Ok((report, String::new()))
    } else {
        Ok((report, csv))
    }
}

fn cmd_verify(
    from: u64,
    to: u64,
    suites: &[Suite],
    perturb: Option<f64>,
    output: Option<&Path>,
    cap: u64,
    seed: u64,
) -> Result<(Report, bool), CliError> {
    let mut report = Report::new("verify");
    let suites: Vec<Suite> = if suites.is_empty() { Suite::ALL.to_vec() } else { suites.to_vec() };
    let opts = VerifyOptions {
        seed,
        dense_cap: Some(cap),
        perturb_rho_w: perturb,
    };
    let primes = odd_primes_in(from, to);
    let start = Instant::now();
    let results = verify::run(&primes, &suites, &opts)?;
    report.timing("verify", start);
    let passed = verify::all_passed(&results);
    report.add("range", format!("{from}..={to}"));
    let names: Vec<&str> = suites.iter().map(|s| s.name()).collect();
    report.add("suites", names.join(","));
    report.add("checks", results.len());
    report.add("failed", results.iter().filter(|c| !c.passed).count());
    for c in &results {
        let mut line = format!(
            "{} p={} {} max_error={:.3e} tolerance={:.0e}",
            c.name,
            c.p,
            if c.passed { "pass" } else { "FAIL" },
            c.max_error,
            c.tolerance
        );
        if let Some(note) = &c.note {
            let _ = write!(line, " note=\"{note}\"");
        }
        report.add("check", line);
    }
    report.add("result", if passed { "pass" } else { "fail" });
    if let Some(path) = output {
        io::write_text(path, &report.render())?;
        report.add("output", path.display());
    }
    Ok((report, passed))
}

fn random_input(p: u64, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p);
    (0..p)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

fn min_ms(reps: usize, mut run: impl FnMut() -> Result<(), CliError>) -> Result<f64, CliError> {
    let mut best = f64::INFINITY;
    for _ in 0..reps.max(1) {
        let start = Instant::now();
        run()?;
        best = best.min(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(best)
}

fn cmd_bench(primes: &[u64], reps: usize, output: Option<&Path>, cap: u64, seed: u64) -> Result<(Report, String), CliError> {
    let mut report = Report::new("bench");
    let mut csv = String::from("p,fot_ms,dense_dot_ms\n");
    for &p in primes {
        let f = field(p, cap)?;
        let x = random_input(p, seed);
        let fot_ms = if p % 4 == 1 {
            let v = min_ms(reps, || {
                FastOscillator::new(&f)?.transform(&x)?;
                Ok(())
            })?;
            format!("{v:.3}")
        } else {
            "skipped (p = 3 mod 4)".to_string()
        };
        let dense_ms = if p <= cap {
            let v = min_ms(reps, || {
                let basis = eigenbasis(&torus(&f, TorusKind::WeylCentralizer))?;
                dot_transform(&basis, &x)?;
                Ok(())
            })?;
            format!("{v:.3}")
        } else {
            "skipped (dense cap)".to_string()
        };
        report.add(&format!("timing.p{p}.fot_ms"), &fot_ms);
        report.add(&format!("timing.p{p}.dense_dot_ms"), &dense_ms);
        let _ = writeln!(csv, "{p},{fot_ms},{dense_ms}");
    }
    if let Some(path) = output {
        io::write_text(path, &csv)?;
        report.add("output", path.display());
        Ok((report, String::new()))
    } else {
        Ok((report, csv))
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let cap = cli.dense_cap;
    let seed = cli.seed;
    let (report, extra, ok) = match cli.command {
        Command::Eigenbasis { p, torus, output } => {
            (cmd_eigenbasis(p, torus, &output, cap)?, String::new(), true)
        }
        Command::Transform {
            input,
            torus,
            mode,
            p,
            synthesize,
            output,
        } => (
            cmd_transform(&input, torus, mode, p, synthesize, &output, cap)?,
            String::new(),
            true,
        ),
        Command::Fot { input, p, output } => (cmd_fot(&input, p, &output)?, String::new(), true),
        Command::Multiplicities { from, to, output } => {
            let (r, csv) = cmd_multiplicities(from, to, output.as_deref())?;
            (r, csv, true)
        }
        Command::Verify {
            from,
            to,
            suite,
            perturb_rho_w,
            output,
        } => {
            let (r, ok) = cmd_verify(from, to, &suite, perturb_rho_w, output.as_deref(), cap, seed)?;
            (r, String::new(), ok)
        }
        Command::Bench { primes, reps, output } => {
            let (r, csv) = cmd_bench(&primes, reps, output.as_deref(), cap, seed)?;
            (r, csv, true)
        }
    };
    print!("{extra}");
    print!("{}", report.render());
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
