//! Command-line front end: distribution tables, spectra, generating
//! functions, moments, simulation, and cross-method comparison reports in
//! deterministic JSON or CSV.
//!
//! Exit codes: 0 success, 2 flag/validation errors (nothing written),
//! 3 numeric/convergence errors, 4 comparison gate failure.

mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qspectral::finite::{
    delta_c_gf, finite_spectrum_phi, finite_spectrum_psi, kappa_c_gf, nt_c_pmf, nu_c_pmf,
};
use qspectral::oracle::{joint_kappa_nu, joint_marginals, uniformized_joint_nd, TruncatedChain};
use qspectral::sim::{expected_tv, simulate, Observable, SimConfig, SimMode};
use qspectral::spectral::mminf_spectral_measure;
use qspectral::transient::{
    arrivals_pmf, d_gf, d_pmf, dt_pmf, exact_means, kappa_gf, kt_pmf, nt_pmf, nu_pmf, DGfMethod,
    NtMethod, NuMethod,
};
use qspectral::QueueParams;

use report::{fmt_f64, render_csv, render_json, Json};

#[derive(Parser)]
#[command(name = "qspectral", version, about = "Observed-queue law calculator")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Distribution table of one law.
    Pmf {
        #[arg(value_enum)]
        law: PmfLaw,
        #[command(flatten)]
        common: Common,
    },
    /// Atoms and masses of a spectral measure.
    Spectrum {
        #[arg(long, value_enum, default_value_t = SpectrumChoice::Psi)]
        kind: SpectrumChoice,
        #[command(flatten)]
        common: Common,
    },
    /// Generating function values at given points.
    Gf {
        #[arg(value_enum)]
        which: GfLaw,
        /// Evaluation points, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        z: Vec<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Closed-form moments.
    Moments {
        #[command(flatten)]
        common: Common,
    },
    /// Monte Carlo run; empirical frequencies per observable.
    Simulate {
        #[command(flatten)]
        common: Common,
    },
    /// Per-outcome comparison of every applicable method.
    Compare {
        #[arg(long, value_enum)]
        law: CompareLaw,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PmfLaw {
    /// Occupancy at a fixed time.
    Nt,
    /// Departures by a fixed time.
    Dt,
    /// Transitions by a fixed time.
    Kt,
    /// Occupancy when the observer exits.
    Nu,
    /// Departures during the observer window.
    D,
    /// Arrivals during the observer window.
    Arrivals,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum SpectrumChoice {
    /// Observed-chain spectral measure (unbounded).
    Psi,
    /// Observed-chain spectral measure at finite capacity.
    PsiC,
    /// Occupancy-generator spectral measure at finite capacity.
    PhiC,
}

#[derive(Clone, Copy, ValueEnum)]
enum GfLaw {
    Kappa,
    D,
    KappaC,
    DeltaC,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum CompareLaw {
    Nt,
    Dt,
    Nu,
    D,
    NuC,
    NtC,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    /// Arrival rate.
    #[arg(long)]
    rho: f64,
    /// Observer exit rate.
    #[arg(long)]
    sigma: Option<f64>,
    /// Server capacity (omit for the unbounded system).
    #[arg(long)]
    c: Option<usize>,
    /// Fixed time horizon.
    #[arg(long)]
    t: Option<f64>,
    /// Largest outcome index (auto-extended until the tail is below tol).
    #[arg(long)]
    kmax: Option<usize>,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Simulation seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Simulation replications.
    #[arg(long)]
    reps: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output path (default: standard output).
    #[arg(long)]
    output: Option<PathBuf>,
}

struct Failure {
    code: i32,
    msg: String,
}

impl Failure {
    fn flags(msg: impl Into<String>) -> Self {
        Failure {
            code: 2,
            msg: msg.into(),
        }
    }
}

fn numeric(err: qspectral::Error) -> Failure {
    Failure {
        code: 3,
        msg: err.to_string(),
    }
}

struct Artifact {
    json: Json,
    csv_header: Vec<&'static str>,
    csv_rows: Vec<Vec<String>>,
    exit: i32,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let (common, artifact) = match dispatch(&cli) {
        Ok(pair) => pair,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            std::process::exit(f.code);
        }
    };
    let content = match common.format {
        Format::Json => render_json(&artifact.json),
        Format::Csv => render_csv(&artifact.csv_header, &artifact.csv_rows),
    };
    match &common.output {
        None => print!("{content}"),
        Some(path) => {
            if let Err(e) = std::fs::write(path, content) {
                eprintln!("error: writing {}: {e}", path.display());
                std::process::exit(3);
            }
        }
    }
    std::process::exit(artifact.exit);
}

fn dispatch(cli: &Cli) -> Result<(&Common, Artifact), Failure> {
    match &cli.cmd {
        Command::Pmf { law, common } => Ok((common, cmd_pmf(*law, common)?)),
        Command::Spectrum { kind, common } => Ok((common, cmd_spectrum(*kind, common)?)),
        Command::Gf { which, z, common } => Ok((common, cmd_gf(*which, z, common)?)),
        Command::Moments { common } => Ok((common, cmd_moments(common)?)),
        Command::Simulate { common } => Ok((common, cmd_simulate(common)?)),
        Command::Compare { law, common } => Ok((common, cmd_compare(*law, common)?)),
    }
}

fn need_sigma(common: &Common) -> Result<f64, Failure> {
    common
        .sigma
        .ok_or_else(|| Failure::flags("--sigma is required for this command"))
}

fn need_t(common: &Common) -> Result<f64, Failure> {
    let t = common
        .t
        .ok_or_else(|| Failure::flags("--t is required for this law"))?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(Failure::flags(format!("--t must be finite and >= 0, got {t}")));
    }
    Ok(t)
}

fn need_c(common: &Common) -> Result<usize, Failure> {
    common
        .c
        .ok_or_else(|| Failure::flags("--c is required for this law"))
}

fn checked_params(common: &Common, sigma: f64) -> Result<QueueParams, Failure> {
    QueueParams::new(common.rho, sigma, common.c).map_err(|e| Failure::flags(e.to_string()))
}

fn check_rho(common: &Common) -> Result<f64, Failure> {
    if !(common.rho.is_finite() && common.rho > 0.0) {
        return Err(Failure::flags(format!(
            "--rho must be positive, got {}",
            common.rho
        )));
    }
    Ok(common.rho)
}

fn check_tol(common: &Common) -> Result<f64, Failure> {
    if !(common.tol.is_finite() && common.tol > 0.0) {
        return Err(Failure::flags(format!(
            "--tol must be positive, got {}",
            common.tol
        )));
    }
    Ok(common.tol)
}

fn params_json(common: &Common) -> Json {
    let mut o = Json::obj();
    o.push(("rho".into(), Json::Num(common.rho)));
    if let Some(s) = common.sigma {
        o.push(("sigma".into(), Json::Num(s)));
    }
    if let Some(c) = common.c {
        o.push(("capacity".into(), Json::Int(c as i64)));
    }
    if let Some(t) = common.t {
        o.push(("t".into(), Json::Num(t)));
    }
    Json::Obj(o)
}

fn schema(
    command: &str,
    common: &Common,
    methods: &[&str],
    support: Json,
    values: Json,
    tail_bound: f64,
    seed: Option<u64>,
) -> Json {
    let mut o = Json::obj();
    o.push(("command".into(), Json::Str(command.into())));
    o.push(("params".into(), params_json(common)));
    o.push((
        "methods".into(),
        Json::Arr(methods.iter().map(|m| Json::Str((*m).into())).collect()),
    ));
    o.push(("support".into(), support));
    o.push(("values".into(), values));
    o.push(("tail_bound".into(), Json::Num(tail_bound)));
    o.push(("tol".into(), Json::Num(common.tol)));
    if let Some(s) = seed {
        o.push(("seed".into(), Json::Int(s as i64)));
    }
    o.push((
        "version".into(),
        Json::Str(env!("CARGO_PKG_VERSION").into()),
    ));
    Json::Obj(o)
}

fn index_support(len: usize) -> Json {
    Json::Arr((0..len).map(|i| Json::Int(i as i64)).collect())
}

/// Tabulate a pmf: explicit `kmax`, or extend until the tail drops below
/// `tol` (hard cap to turn non-convergence into a numeric error).
fn tabulate(
    kmax: Option<usize>,
    hard_cap: Option<usize>,
    tol: f64,
    f: impl Fn(u64) -> Result<f64, Failure>,
) -> Result<(Vec<f64>, f64), Failure> {
    let mut values = Vec::new();
    let mut sum = 0.0;
    let limit = match (kmax, hard_cap) {
        (Some(k), Some(cap)) => k.min(cap),
        (Some(k), None) => k,
        (None, Some(cap)) => cap,
        (None, None) => 100_000,
    };
    for i in 0..=limit {
        let v = f(i as u64)?;
        values.push(v);
        sum += v;
        if kmax.is_none() && hard_cap.is_none() && 1.0 - sum < tol {
            break;
        }
    }
    if kmax.is_none() && hard_cap.is_none() && 1.0 - sum >= tol {
        return Err(Failure {
            code: 3,
            msg: format!("pmf tail did not reach {tol:e} within {limit} terms"),
        });
    }
    Ok((values, (1.0 - sum).max(0.0)))
}

fn pmf_artifact(
    command: &str,
    common: &Common,
    method: &str,
    values: Vec<f64>,
    tail: f64,
) -> Artifact {
    let json = schema(
        command,
        common,
        &[method],
        index_support(values.len()),
        Json::Arr(values.iter().map(|&v| Json::Num(v)).collect()),
        tail,
        None,
    );
    let rows = values
        .iter()
        .enumerate()
        .map(|(i, &v)| vec![i.to_string(), fmt_f64(v)])
        .collect();
    Artifact {
        json,
        csv_header: vec!["index", "value"],
        csv_rows: rows,
        exit: 0,
    }
}

fn cmd_pmf(law: PmfLaw, common: &Common) -> Result<Artifact, Failure> {
    let rho = check_rho(common)?;
    let tol = check_tol(common)?;
    let cap_support = common.c.map(|c| c); // capacity laws live on 0..=c
    let (name, method, values, tail) = match law {
        PmfLaw::Nt => {
            let t = need_t(common)?;
            match common.c {
                None => {
                    let (v, tail) = tabulate(common.kmax, None, tol, |m| {
                        nt_pmf(m, rho, t, NtMethod::ClosedForm).map_err(numeric)
                    })?;
                    ("pmf nt", "closed_form", v, tail)
                }
                Some(c) => {
                    let (v, tail) = tabulate(common.kmax, Some(c), tol, |m| {
                        nt_c_pmf(m, c, rho, t).map_err(numeric)
                    })?;
                    ("pmf nt", "spectral", v, tail)
                }
            }
        }
        PmfLaw::Dt => {
            let t = need_t(common)?;
            let (v, tail) = tabulate(common.kmax, None, tol, |k| {
                dt_pmf(k, rho, t).map_err(numeric)
            })?;
            ("pmf dt", "closed_form", v, tail)
        }
        PmfLaw::Kt => {
            let t = need_t(common)?;
            let (v, tail) = tabulate(common.kmax, None, tol, |k| {
                kt_pmf(k, rho, t).map_err(numeric)
            })?;
            ("pmf kt", "closed_form", v, tail)
        }
        PmfLaw::Nu => {
            let sigma = need_sigma(common)?;
            let params = checked_params(common, sigma)?;
            match common.c {
                None => {
                    let (v, tail) = tabulate(common.kmax, None, tol, |m| {
                        nu_pmf(m, &params, NuMethod::Kummer).map_err(numeric)
                    })?;
                    ("pmf nu", "closed_form", v, tail)
                }
                Some(_) => {
                    let (v, tail) = tabulate(common.kmax, cap_support, tol, |m| {
                        nu_c_pmf(m, &params).map_err(numeric)
                    })?;
                    ("pmf nu", "spectral", v, tail)
                }
            }
        }
        PmfLaw::D => {
            let sigma = need_sigma(common)?;
            let params = checked_params(common, sigma)?;
            if common.c.is_some() {
                return Err(Failure::flags(
                    "pmf d supports the unbounded system only; use gf delta-c",
                ));
            }
            let (v, tail) =
                tabulate(common.kmax, None, tol, |k| d_pmf(k, &params).map_err(numeric))?;
            ("pmf d", "spectral", v, tail)
        }
        PmfLaw::Arrivals => {
            let sigma = need_sigma(common)?;
            let params = checked_params(common, sigma)?;
            if common.c.is_some() {
                return Err(Failure::flags("pmf arrivals supports the unbounded system only"));
            }
            let (v, tail) =
                tabulate(common.kmax, None, tol, |m| Ok(arrivals_pmf(m, &params)))?;
            ("pmf arrivals", "closed_form", v, tail)
        }
    };
    Ok(pmf_artifact(name, common, method, values, tail))
}

fn cmd_spectrum(kind: SpectrumChoice, common: &Common) -> Result<Artifact, Failure> {
    check_rho(common)?;
    let tol = check_tol(common)?;
    let (atoms, tail): (Vec<(f64, f64)>, f64) = match kind {
        SpectrumChoice::Psi => {
            let sigma = need_sigma(common)?;
            if common.c.is_some() {
                return Err(Failure::flags("use --kind psi-c for a finite capacity"));
            }
            let params = checked_params(common, sigma)?;
            let measure = mminf_spectral_measure(&params, tol).map_err(numeric)?;
            (measure.atoms().to_vec(), measure.tail_bound())
        }
        SpectrumChoice::PsiC => {
            let sigma = need_sigma(common)?;
            need_c(common)?;
            let params = checked_params(common, sigma)?;
            let spec = finite_spectrum_psi(&params).map_err(numeric)?;
            (
                spec.eigenvalues()
                    .iter()
                    .copied()
                    .zip(spec.masses().iter().copied())
                    .collect(),
                0.0,
            )
        }
        SpectrumChoice::PhiC => {
            let c = need_c(common)?;
            let spec = finite_spectrum_phi(c, common.rho).map_err(numeric)?;
            (
                spec.eigenvalues()
                    .iter()
                    .copied()
                    .zip(spec.masses().iter().copied())
                    .collect(),
                0.0,
            )
        }
    };
    let json = schema(
        "spectrum",
        common,
        &["spectral"],
        Json::Arr(atoms.iter().map(|&(x, _)| Json::Num(x)).collect()),
        Json::Arr(atoms.iter().map(|&(_, m)| Json::Num(m)).collect()),
        tail,
        None,
    );
    let rows = atoms
        .iter()
        .map(|&(x, m)| vec![fmt_f64(x), fmt_f64(m)])
        .collect();
    Ok(Artifact {
        json,
        csv_header: vec!["atom", "mass"],
        csv_rows: rows,
        exit: 0,
    })
}

fn cmd_gf(which: GfLaw, z: &[f64], common: &Common) -> Result<Artifact, Failure> {
    check_rho(common)?;
    check_tol(common)?;
    if z.iter().any(|x| !x.is_finite()) {
        return Err(Failure::flags("--z entries must be finite"));
    }
    let sigma = need_sigma(common)?;
    let params = checked_params(common, sigma)?;
    let (name, method): (&str, &str) = match which {
        GfLaw::Kappa => ("gf kappa", "spectral"),
        GfLaw::D => ("gf d", "closed_form"),
        GfLaw::KappaC => ("gf kappa-c", "spectral"),
        GfLaw::DeltaC => ("gf delta-c", "spectral"),
    };
    let eval = |zz: f64| -> Result<f64, Failure> {
        match which {
            GfLaw::Kappa => {
                if params.capacity.is_some() {
                    return Err(Failure::flags("gf kappa is unbounded-only; use kappa-c"));
                }
                kappa_gf(zz, &params).map_err(numeric)
            }
            GfLaw::D => {
                if params.capacity.is_some() {
                    return Err(Failure::flags("gf d is unbounded-only; use delta-c"));
                }
                d_gf(zz, &params, DGfMethod::Kummer).map_err(numeric)
            }
            GfLaw::KappaC => {
                need_c(common)?;
                kappa_c_gf(zz, &params).map_err(numeric)
            }
            GfLaw::DeltaC => {
                need_c(common)?;
                delta_c_gf(zz, &params).map_err(numeric)
            }
        }
    };
    let values: Vec<f64> = z.iter().map(|&zz| eval(zz)).collect::<Result<_, _>>()?;
    let json = schema(
        name,
        common,
        &[method],
        Json::Arr(z.iter().map(|&x| Json::Num(x)).collect()),
        Json::Arr(values.iter().map(|&v| Json::Num(v)).collect()),
        0.0,
        None,
    );
    let rows = z
        .iter()
        .zip(&values)
        .map(|(&zz, &v)| vec![fmt_f64(zz), fmt_f64(v)])
        .collect();
    Ok(Artifact {
        json,
        csv_header: vec!["z", "value"],
        csv_rows: rows,
        exit: 0,
    })
}

fn cmd_moments(common: &Common) -> Result<Artifact, Failure> {
    check_rho(common)?;
    check_tol(common)?;
    let sigma = need_sigma(common)?;
    if common.c.is_some() {
        return Err(Failure::flags("moments supports the unbounded system only"));
    }
    let params = checked_params(common, sigma)?;
    if let Some(t) = common.t {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Failure::flags(format!("--t must be finite and >= 0, got {t}")));
        }
    }
    let means = exact_means(&params, common.t).map_err(numeric)?;
    let mut fields: Vec<(&str, f64)> = vec![
        ("E_a", means.arrivals.mean),
        ("E_nu", means.in_system.mean),
        ("E_d", means.departures.mean),
        ("E_kappa", means.transitions.mean),
    ];
    if let Some(m2) = means.transitions.second_moment {
        fields.push(("E_kappa2", m2));
    }
    if let Some(kt) = means.transitions_t {
        fields.push(("E_K_t", kt.mean));
        if let Some(m2) = kt.second_moment {
            fields.push(("E_K_t2", m2));
        }
    }
    let values = Json::Obj(
        fields
            .iter()
            .map(|&(k, v)| (k.to_string(), Json::Num(v)))
            .collect(),
    );
    let support = Json::Arr(
        fields
            .iter()
            .map(|&(k, _)| Json::Str(k.into()))
            .collect(),
    );
    let json = schema("moments", common, &["closed_form"], support, values, 0.0, None);
    let rows = fields
        .iter()
        .map(|&(k, v)| vec![k.to_string(), fmt_f64(v)])
        .collect();
    Ok(Artifact {
        json,
        csv_header: vec!["name", "value"],
        csv_rows: rows,
        exit: 0,
    })
}

fn sim_config(common: &Common) -> Result<SimConfig, Failure> {
    check_rho(common)?;
    let mode = match common.t {
        Some(_) => SimMode::FixedT(need_t(common)?),
        None => SimMode::Observer,
    };
    let sigma = match mode {
        SimMode::Observer => need_sigma(common)?,
        // The fixed-horizon run never consults the observer clock.
        SimMode::FixedT(_) => common.sigma.unwrap_or(1.0),
    };
    let params = checked_params(common, sigma)?;
    let replications = common.reps.unwrap_or(100_000);
    if replications == 0 {
        return Err(Failure::flags("--reps must be positive"));
    }
    Ok(SimConfig {
        params,
        replications,
        seed: common.seed.unwrap_or(0),
        mode,
    })
}

fn cmd_simulate(common: &Common) -> Result<Artifact, Failure> {
    check_tol(common)?;
    let config = sim_config(common)?;
    let law = simulate(&config).map_err(numeric)?;
    let mut values = Json::obj();
    let mut rows = Vec::new();
    let mut max_len = 0usize;
    for obs in law.observables().collect::<Vec<_>>() {
        let counts = law.counts(obs).unwrap();
        let freq = law.frequencies(obs).unwrap();
        let se = law.std_errors(obs).unwrap();
        max_len = max_len.max(counts.len());
        let mut o = Json::obj();
        o.push((
            "counts".into(),
            Json::Arr(counts.iter().map(|&c| Json::Int(c as i64)).collect()),
        ));
        o.push((
            "frequencies".into(),
            Json::Arr(freq.iter().map(|&f| Json::Num(f)).collect()),
        ));
        o.push((
            "std_errors".into(),
            Json::Arr(se.iter().map(|&s| Json::Num(s)).collect()),
        ));
        values.push((obs.as_str().to_string(), Json::Obj(o)));
        for i in 0..counts.len() {
            rows.push(vec![
                obs.as_str().to_string(),
                i.to_string(),
                counts[i].to_string(),
                fmt_f64(freq[i]),
                fmt_f64(se[i]),
            ]);
        }
    }
    let mut json = schema(
        "simulate",
        common,
        &["simulation"],
        index_support(max_len),
        Json::Obj(values),
        0.0,
        Some(config.seed),
    );
    if let Json::Obj(fields) = &mut json {
        fields.push(("replications".into(), Json::Int(config.replications as i64)));
    }
    Ok(Artifact {
        json,
        csv_header: vec!["observable", "index", "count", "frequency", "std_error"],
        csv_rows: rows,
        exit: 0,
    })
}

struct MethodColumn {
    name: &'static str,
    values: Vec<f64>,
}

/// Observer-window oracle marginals, with the transition horizon doubled
/// until the truncated joint table captures all but 1e-10 of the mass.
fn observer_oracle(params: &QueueParams) -> Result<qspectral::oracle::JointMarginals, Failure> {
    let chain = TruncatedChain::new(params).map_err(numeric)?;
    let mut horizon = 200;
    loop {
        let table = joint_kappa_nu(&chain, horizon).map_err(numeric)?;
        let marg = joint_marginals(&table);
        if 1.0 - marg.total < 1e-10 {
            return Ok(marg);
        }
        horizon *= 2;
        if horizon > 12_800 {
            return Err(Failure {
                code: 3,
                msg: "oracle joint table did not capture the law".into(),
            });
        }
    }
}

fn slice_to(v: &[f64], len: usize) -> Vec<f64> {
    (0..len).map(|i| v.get(i).copied().unwrap_or(0.0)).collect()
}

fn cmd_compare(law: CompareLaw, common: &Common) -> Result<Artifact, Failure> {
    let rho = check_rho(common)?;
    let tol = check_tol(common)?;
    let needs_c = matches!(law, CompareLaw::NuC | CompareLaw::NtC);
    if needs_c && common.c.is_none() {
        return Err(Failure::flags("--c is required for this law"));
    }
    if !needs_c && common.c.is_some() {
        return Err(Failure::flags("--c only applies to nu-c / nt-c"));
    }

    // Reference column used to choose the support; then the other methods.
    let mut columns: Vec<MethodColumn> = Vec::new();
    let law_name;
    match law {
        CompareLaw::Nt => {
            law_name = "nt";
            let t = need_t(common)?;
            let (closed, _) = tabulate(common.kmax, None, tol, |m| {
                nt_pmf(m, rho, t, NtMethod::ClosedForm).map_err(numeric)
            })?;
            let len = closed.len();
            let spectral: Vec<f64> = (0..len as u64)
                .map(|m| nt_pmf(m, rho, t, NtMethod::Spectral).map_err(numeric))
                .collect::<Result<_, _>>()?;
            let joint = fixed_t_oracle(rho, None, t, len)?;
            let oracle: Vec<f64> = (0..len)
                .map(|n| joint.get(n).map_or(0.0, |row| row.iter().sum()))
                .collect();
            columns.push(MethodColumn { name: "spectral", values: spectral });
            columns.push(MethodColumn { name: "closed_form", values: closed });
            columns.push(MethodColumn { name: "oracle", values: oracle });
        }
        CompareLaw::Dt => {
            law_name = "dt";
            let t = need_t(common)?;
            let (closed, _) = tabulate(common.kmax, None, tol, |k| {
                dt_pmf(k, rho, t).map_err(numeric)
            })?;
            let len = closed.len();
            let joint = fixed_t_oracle(rho, None, t, len)?;
            let oracle: Vec<f64> = (0..len)
                .map(|d| joint.iter().map(|row| row.get(d).copied().unwrap_or(0.0)).sum())
                .collect();
            columns.push(MethodColumn { name: "closed_form", values: closed });
            columns.push(MethodColumn { name: "oracle", values: oracle });
        }
        CompareLaw::Nu => {
            law_name = "nu";
            let sigma = need_sigma(common)?;
            let params = checked_params(common, sigma)?;
            let (closed, _) = tabulate(common.kmax, None, tol, |m| {
                nu_pmf(m, &params, NuMethod::Kummer).map_err(numeric)
            })?;
            let len = closed.len();
            let spectral: Vec<f64> = (0..len as u64)
                .map(|m| nu_pmf(m, &params, NuMethod::Spectral).map_err(numeric))
                .collect::<Result<_, _>>()?;
            let marg = observer_oracle(&params)?;
            columns.push(MethodColumn { name: "spectral", values: spectral });
            columns.push(MethodColumn { name: "closed_form", values: closed });
            columns.push(MethodColumn { name: "oracle", values: slice_to(&marg.nu, len) });
        }
        CompareLaw::D => {
            law_name = "d";
            let sigma = need_sigma(common)?;
            let params = checked_params(common, sigma)?;
            let (spectral, _) = tabulate(common.kmax, None, tol, |k| {
                d_pmf(k, &params).map_err(numeric)
            })?;
            let len = spectral.len();
            let marg = observer_oracle(&params)?;
            columns.push(MethodColumn { name: "spectral", values: spectral });
            columns.push(MethodColumn {
                name: "oracle",
                values: slice_to(&marg.departures, len),
            });
        }
        CompareLaw::NuC => {
            law_name = "nu-c";
            let sigma = need_sigma(common)?;
            let params = checked_params(common, sigma)?;
            let c = params.capacity.unwrap();
            let spectral: Vec<f64> = (0..=c as u64)
                .map(|m| nu_c_pmf(m, &params).map_err(numeric))
                .collect::<Result<_, _>>()?;
            let marg = observer_oracle(&params)?;
            columns.push(MethodColumn { name: "spectral", values: spectral });
            columns.push(MethodColumn {
                name: "oracle",
                values: slice_to(&marg.nu, c + 1),
            });
        }
        CompareLaw::NtC => {
            law_name = "nt-c";
            let t = need_t(common)?;
            let c = common.c.unwrap();
            let spectral: Vec<f64> = (0..=c as u64)
                .map(|m| nt_c_pmf(m, c, rho, t).map_err(numeric))
                .collect::<Result<_, _>>()?;
            let joint = fixed_t_oracle(rho, Some(c), t, c + 1)?;
            let oracle: Vec<f64> = (0..=c)
                .map(|n| joint.get(n).map_or(0.0, |row| row.iter().sum()))
                .collect();
            columns.push(MethodColumn { name: "spectral", values: spectral });
            columns.push(MethodColumn { name: "oracle", values: oracle });
        }
    }
    let len = columns[0].values.len();

    // Optional simulation column.
    let mut sim_col: Option<(Vec<f64>, Vec<f64>, u64)> = None;
    if let Some(reps) = common.reps {
        if reps == 0 {
            return Err(Failure::flags("--reps must be positive"));
        }
        let obs = match law {
            CompareLaw::Nu | CompareLaw::NuC => Observable::LeftBehind,
            CompareLaw::D => Observable::Departures,
            CompareLaw::Nt | CompareLaw::NtC => Observable::Occupancy,
            CompareLaw::Dt => Observable::DeparturesAt,
        };
        let config = sim_config(common)?;
        let empirical = simulate(&config).map_err(numeric)?;
        let freq = slice_to(&empirical.frequencies(obs).unwrap(), len);
        let se = slice_to(&empirical.std_errors(obs).unwrap(), len);
        sim_col = Some((freq, se, config.seed));
    }

    let mut max_analytic: f64 = 0.0;
    let mut rows_json = Vec::new();
    let mut rows_csv = Vec::new();
    for i in 0..len {
        let mut obj = Json::obj();
        obj.push(("index".into(), Json::Int(i as i64)));
        let mut csv_row = vec![i.to_string(), String::new(), String::new(), String::new()];
        let mut present: Vec<f64> = Vec::new();
        for col in &columns {
            let v = col.values[i];
            obj.push((col.name.to_string(), Json::Num(v)));
            let slot = match col.name {
                "spectral" => 1,
                "closed_form" => 2,
                _ => 3,
            };
            csv_row[slot] = fmt_f64(v);
            for &p in &present {
                max_analytic = max_analytic.max((p - v).abs());
            }
            present.push(v);
        }
        let mut all_present = present.clone();
        if let Some((freq, se, _)) = &sim_col {
            obj.push(("simulation".into(), Json::Num(freq[i])));
            obj.push(("std_error".into(), Json::Num(se[i])));
            csv_row.push(fmt_f64(freq[i]));
            csv_row.push(fmt_f64(se[i]));
            all_present.push(freq[i]);
        } else {
            csv_row.push(String::new());
            csv_row.push(String::new());
        }
        let mut disc: f64 = 0.0;
        for a in 0..all_present.len() {
            for b in a + 1..all_present.len() {
                disc = disc.max((all_present[a] - all_present[b]).abs());
            }
        }
        obj.push(("discrepancy".into(), Json::Num(disc)));
        csv_row.push(fmt_f64(disc));
        rows_json.push(Json::Obj(obj));
        rows_csv.push(csv_row);
    }

    let mut summary = Json::obj();
    summary.push((
        "max_analytic_discrepancy".into(),
        Json::Num(max_analytic),
    ));
    if let Some((freq, _, _)) = &sim_col {
        let reference = &columns[0].values;
        let tv: f64 = 0.5
            * reference
                .iter()
                .zip(freq)
                .map(|(&p, &f)| (p - f).abs())
                .sum::<f64>();
        summary.push(("tv_simulation".into(), Json::Num(tv)));
        summary.push((
            "tv_budget".into(),
            Json::Num(5.0 * expected_tv(reference, common.reps.unwrap())),
        ));
    }

    let mut method_names: Vec<&str> = columns.iter().map(|c| c.name).collect();
    if sim_col.is_some() {
        method_names.push("simulation");
    }
    let mut values = Json::obj();
    values.push(("law".into(), Json::Str(law_name.into())));
    values.push(("rows".into(), Json::Arr(rows_json)));
    values.push(("summary".into(), Json::Obj(summary)));
    let json = schema(
        "compare",
        common,
        &method_names,
        index_support(len),
        Json::Obj(values),
        0.0,
        sim_col.as_ref().map(|&(_, _, s)| s),
    );
    let exit = if max_analytic > 1e-7 { 4 } else { 0 };
    Ok(Artifact {
        json,
        csv_header: vec![
            "index",
            "spectral",
            "closed_form",
            "oracle",
            "simulation",
            "std_error",
            "discrepancy",
        ],
        csv_rows: rows_csv,
        exit,
    })
}

/// Joint (occupancy, departures) table with the departure truncation set
/// wide enough that the marginals on `0..len` are unaffected.
fn fixed_t_oracle(
    rho: f64,
    capacity: Option<usize>,
    t: f64,
    len: usize,
) -> Result<Vec<Vec<f64>>, Failure> {
    let mean_d = rho * t;
    let dmax = len + (mean_d + 12.0 * (mean_d + 1.0).sqrt() + 25.0) as usize;
    uniformized_joint_nd(rho, capacity, t, dmax).map_err(numeric)
}
