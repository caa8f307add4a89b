use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tacs::{
    bethe_residual, build_hamiltonian, check_mirror_symmetry, classify_zeros, diagonalize,
    energy_from_zeros, enumerate_sectors, extract_bands, overlap_matrix, pair_degeneracies,
    polynomial_zeros, quadratic_fit, solve_sector, solve_spectrum, spectra_equivalent,
    state_amplitudes, verify_state, Form, HalfInt, ModelConfig, Parity, Spectrum,
};

#[derive(Parser)]
#[command(name = "tacs", version, about = "Exact solver for the two-axis countertwisting spin Hamiltonian")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the full spectrum for one J and print all 2J+1 levels.
    Spectrum(SpectrumArgs),
    /// Run the invariant suites up to J-max and report per-J pass/fail.
    Verify(VerifyArgs),
    /// Extract yrast/yrare bands up to J-max and optionally fit them.
    Bands(BandsArgs),
    /// Print the reconstructed eigenvector of one level.
    State(StateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
    Table,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Total angular momentum, e.g. "21/2", "10.5" or "3".
    #[arg(long = "J")]
    j: String,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,
    /// Energy multiplier chi; affects the table display only.
    #[arg(long, default_value_t = 1.0)]
    chi: f64,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "J-max")]
    j_max: String,
    /// Spectral comparison tolerance, relative to max(1, max|E|).
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Corrupt one polynomial coefficient before checking (negative test).
    #[arg(long, hide = true, default_value_t = false)]
    inject_corruption: bool,
}

#[derive(Args)]
struct BandsArgs {
    #[arg(long = "J-max")]
    j_max: String,
    /// Comma-separated band indices, e.g. "1,2".
    #[arg(long, default_value = "1")]
    zeta: String,
    /// Append quadratic-fit summary lines.
    #[arg(long, default_value_t = false)]
    fit: bool,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct StateArgs {
    #[arg(long = "J")]
    j: String,
    #[arg(long)]
    zeta: usize,
    /// Sector "a" is (1,0) for half-integer J and (J,0,0) for integer J;
    /// "b" is (0,1) and (J-1,1,1) respectively.
    #[arg(long)]
    sector: String,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,
}

fn parse_j(s: &str) -> Result<HalfInt, ExitCode> {
    match s.parse::<HalfInt>() {
        Ok(j) if j.twice() >= 0 => Ok(j),
        Ok(_) => {
            eprintln!("error: J must be nonnegative, got {s}");
            Err(ExitCode::from(2))
        }
        Err(e) => {
            eprintln!("error: {e}");
            Err(ExitCode::from(2))
        }
    }
}

fn emit(text: String, out: &Option<String>) -> Result<(), ExitCode> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| {
            eprintln!("error: cannot write {path}: {e}");
            ExitCode::from(1)
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn spectrum_json(spec: &Spectrum) -> Result<String, ExitCode> {
    let mut levels = Vec::new();
    for level in &spec.levels {
        let zeros = polynomial_zeros(&level.polynomial).map_err(fail)?;
        levels.push(json!({
            "zeta": level.zeta,
            "k": level.sector().k,
            "nu_a": level.sector().nu_a,
            "nu_b": level.sector().nu_b,
            "E_over_chi": level.energy_over_chi,
            "g0": level.polynomial.g0,
            "coeffs": level.polynomial.coeffs,
            "zeros": zeros.zeros.iter().map(|w| vec![w.re, w.im]).collect::<Vec<_>>(),
        }));
    }
    let doc = json!({ "J": spec.j.to_string(), "levels": levels });
    Ok(format!("{}\n", serde_json::to_string_pretty(&doc).map_err(fail)?))
}

fn fail<E: std::fmt::Display>(e: E) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(1)
}

fn cmd_spectrum(args: &SpectrumArgs) -> Result<(), ExitCode> {
    let j = parse_j(&args.j)?;
    let spec = solve_spectrum(j).map_err(fail)?;
    let text = match args.format {
        OutputFormat::Json => spectrum_json(&spec)?,
        OutputFormat::Csv => {
            let mut s = String::from("zeta,k,nu_a,nu_b,E_over_chi,g0\n");
            for l in &spec.levels {
                let sec = l.sector();
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    l.zeta, sec.k, sec.nu_a, sec.nu_b, l.energy_over_chi, l.polynomial.g0
                ));
            }
            s
        }
        OutputFormat::Table => {
            let mut s = format!("J = {}  ({} levels)\n", spec.j, spec.levels.len());
            s.push_str(&format!(
                "{:>4} {:>3} {:>4} {:>4} {:>14} {:>14}\n",
                "zeta", "k", "nu_a", "nu_b", "g0", "E"
            ));
            for l in &spec.levels {
                let sec = l.sector();
                s.push_str(&format!(
                    "{:>4} {:>3} {:>4} {:>4} {:>14.6} {:>14.6}\n",
                    l.zeta,
                    sec.k,
                    sec.nu_a,
                    sec.nu_b,
                    l.polynomial.g0,
                    l.energy_over_chi * args.chi
                ));
            }
            s
        }
    };
    emit(text, &args.out)
}

struct VerifyReport {
    failures: Vec<String>,
}

impl VerifyReport {
    fn check(&mut self, j: HalfInt, name: &str, ok: bool) {
        if !ok {
            self.failures.push(format!("{name} at J={j}"));
        }
    }
}

fn verify_one_j(j: HalfInt, tol: f64, corrupt: bool, report: &mut VerifyReport) -> Result<(), ExitCode> {
    let spec = solve_spectrum(j).map_err(fail)?;
    let scale = spec.energy_scale();

    report.check(j, "completeness", spec.levels.len() == j.multiplet_dim());

    let oracle = diagonalize(&build_hamiltonian(j, Form::Original, 1.0).map_err(fail)?).map_err(fail)?;
    let hs_energies = spec.energies();
    let oracle_ok = hs_energies
        .iter()
        .zip(&oracle.energies)
        .all(|(a, b)| (a - b).abs() <= tol * scale);
    report.check(j, "oracle-equivalence", oracle_ok);

    let rotated =
        diagonalize(&build_hamiltonian(j, Form::RotatedTa, 1.0).map_err(fail)?).map_err(fail)?;
    report.check(
        j,
        "rotation-equivalence",
        spectra_equivalent(&oracle, &rotated, tol).map_err(fail)?,
    );

    report.check(j, "mirror-symmetry", check_mirror_symmetry(&spec) <= tol * scale);

    if j.is_half_odd() {
        report.check(j, "double-degeneracy", pair_degeneracies(&spec, tol).is_ok());

        let sectors = enumerate_sectors(j).map_err(fail)?;
        let ea: Vec<f64> = solve_sector(&ModelConfig::new(sectors[0]))
            .map_err(fail)?
            .iter()
            .map(|l| l.energy_over_chi)
            .collect();
        let eb: Vec<f64> = solve_sector(&ModelConfig::new(sectors[1]))
            .map_err(fail)?
            .iter()
            .map(|l| l.energy_over_chi)
            .collect();
        let swap_ok = ea.iter().zip(&eb).all(|(a, b)| (a - b).abs() <= 1e-8 * scale);
        report.check(j, "sector-swap-degeneracy", swap_ok);

        let k = (j.twice() as usize - 1) / 2;
        let has_zero = spec.energies().iter().any(|e| e.abs() < 1e-8 * scale);
        report.check(j, "zero-energy-parity-rule", has_zero == k.is_multiple_of(2));
    }

    // The polynomial-level contracts are pinned on the desk-scale domain.
    if j.twice() <= 21 {
        let h_rot = build_hamiltonian(j, Form::RotatedTa, 1.0).map_err(fail)?;
        let mut per_sector: std::collections::HashMap<String, Vec<tacs::StateVector>> =
            std::collections::HashMap::new();
        for (idx, level) in spec.levels.iter().enumerate() {
            let mut poly = level.polynomial.clone();
            if corrupt && idx == 0 && poly.degree() >= 1 {
                poly.coeffs[0] *= 1.0 + 1e-3;
            }
            if poly.degree() >= 1 {
                let zeros = polynomial_zeros(&poly).map_err(fail)?;
                let r = bethe_residual(&zeros, &poly.config).map_err(fail)?;
                report.check(j, "bethe-residual", r < 1e-6);
                report.check(j, "zero-conjugate-closure", zeros.conjugation_defect() < 1e-8);
                report.check(j, "zero-interval-membership", classify_zeros(&zeros).is_ok());
                let e13 = energy_from_zeros(&poly.config, &zeros.zeros);
                report.check(
                    j,
                    "energy-route-consistency",
                    (e13 - level.energy_over_chi).abs() <= 1e-8 * scale,
                );
            }
            let corrupted_level = tacs::Level {
                zeta: level.zeta,
                energy_over_chi: level.energy_over_chi,
                polynomial: poly,
            };
            let v = state_amplitudes(&corrupted_level).map_err(fail)?;
            let resid = verify_state(&v, &h_rot, level.energy_over_chi).map_err(fail)?;
            report.check(j, "eigenstate-residual", resid < 1e-8);
            per_sector.entry(level.sector().label()).or_default().push(v);
        }
        for (label, states) in per_sector {
            let g = overlap_matrix(&states).map_err(fail)?;
            let mut ok = true;
            for r in 0..g.nrows() {
                for c in 0..g.ncols() {
                    let want = if r == c { 1.0 } else { 0.0 };
                    if (g[(r, c)] - want).abs() > 1e-8 {
                        ok = false;
                    }
                }
            }
            report.check(j, &format!("orthonormality sector {label}"), ok);
        }
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), ExitCode> {
    let j_max = parse_j(&args.j_max)?;
    let mut all_ok = true;
    for start in [1i64, 2] {
        for j in HalfInt::from_twice(start).stride_to(j_max) {
            let mut report = VerifyReport { failures: Vec::new() };
            verify_one_j(j, args.tol, args.inject_corruption, &mut report)?;
            if report.failures.is_empty() {
                println!("J={j}: PASS");
            } else {
                all_ok = false;
                for f in &report.failures {
                    println!("J={j}: FAIL {f}");
                }
            }
        }
    }
    if all_ok {
        Ok(())
    } else {
        Err(ExitCode::from(1))
    }
}

fn cmd_bands(args: &BandsArgs) -> Result<(), ExitCode> {
    let j_max = parse_j(&args.j_max)?;
    let zetas: Vec<usize> = args
        .zeta
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| {
            eprintln!("error: cannot parse --zeta list `{}`", args.zeta);
            ExitCode::from(2)
        })?;
    if zetas.is_empty() || zetas.contains(&0) {
        eprintln!("error: --zeta indices are 1-based");
        return Err(ExitCode::from(2));
    }
    let max_zeta = *zetas.iter().max().unwrap();
    let bands = extract_bands(j_max, Parity::HalfInteger, max_zeta).map_err(fail)?;

    let mut csv = String::from("band,twoJ,E_over_chi,omega\n");
    let mut summary = String::new();
    for &zeta in &zetas {
        let band = &bands[zeta - 1];
        if band.points.is_empty() {
            return Err(fail(tacs::Error::InsufficientPoints { zeta, got: 0, need: 1 }));
        }
        for &(j, e) in &band.points {
            let omega = band
                .omega
                .iter()
                .find(|&&(oj, _)| oj == j)
                .map(|&(_, om)| om.to_string())
                .unwrap_or_default();
            csv.push_str(&format!("{},{},{},{}\n", zeta, j.twice(), e, omega));
        }
        if args.fit {
            let fit = quadratic_fit(band).map_err(fail)?;
            summary.push_str(&format!(
                "zeta={}: a={:.6} b={:.6} c={:.6} rms={:.3e}\n",
                zeta, fit.a, fit.b, fit.c, fit.rms_residual
            ));
        }
    }
    emit(csv, &args.out)?;
    print!("{summary}");
    Ok(())
}

fn cmd_state(args: &StateArgs) -> Result<(), ExitCode> {
    let j = parse_j(&args.j)?;
    let sectors = enumerate_sectors(j).map_err(fail)?;
    let sector = match args.sector.as_str() {
        "a" => sectors[0],
        "b" if sectors.len() > 1 => sectors[1],
        other => {
            eprintln!("error: sector must be `a` or `b` (got `{other}`; J={j} has {} sectors)", sectors.len());
            return Err(ExitCode::from(2));
        }
    };
    let levels = solve_sector(&ModelConfig::new(sector)).map_err(fail)?;
    let level = levels.iter().find(|l| l.zeta == args.zeta).ok_or_else(|| {
        fail(tacs::Error::NoSuchLevel {
            zeta: args.zeta,
            sector: sector.label(),
            j: j.to_string(),
        })
    })?;
    let v = state_amplitudes(level).map_err(fail)?;

    match args.format {
        OutputFormat::Json => {
            let doc = json!({
                "J": j.to_string(),
                "zeta": level.zeta,
                "k": sector.k,
                "nu_a": sector.nu_a,
                "nu_b": sector.nu_b,
                "E_over_chi": level.energy_over_chi,
                "amplitudes": v.amplitudes,
            });
            println!("{}", serde_json::to_string_pretty(&doc).map_err(fail)?);
        }
        _ => {
            println!(
                "J={j} sector {} zeta={} E/chi={:.6}",
                sector.label(),
                level.zeta,
                level.energy_over_chi
            );
            println!("{:>8} {:>20}", "M", "amplitude");
            for (m, amp) in j.multiplet().zip(&v.amplitudes) {
                println!("{:>8} {:>20.12e}", m.to_string(), amp);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Bands(args) => cmd_bands(args),
        Command::State(args) => cmd_state(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => code,
    }
}
