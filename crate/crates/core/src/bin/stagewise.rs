use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use stagewise::boost::{l2boost, BoostConfig, UpdateRule};
use stagewise::dof::{
    bootstrap_model_df, cv_select, BoostModel, BootstrapConfig, DfTable, PathModel,
};
use stagewise::lab::{
    default_data_dir, find_prostate, format_number, gen_haar, load_csv_with, load_prostate,
    run_convergence, run_example_suite, CsvOptions, HaarSpec, Split, DEFAULT_NUS,
};
use stagewise::numcore::{standardize, Dataset};
use stagewise::path::{lars_path, PathVariant};
use stagewise::Error;

#[derive(Parser)]
#[command(name = "stagewise", version, about = "L2-boosting, LARS paths and degrees-of-freedom diagnostics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct DataArgs {
    /// Delimited data file; relative names are also looked up in $STAGEWISE_DATA_DIR.
    #[arg(long)]
    data: PathBuf,
    /// Response column.
    #[arg(long, default_value = "lpsa")]
    response: String,
    /// Column with T/F split labels.
    #[arg(long)]
    train_flag: Option<String>,
    /// Rows to keep when a train-flag column is given.
    #[arg(long, value_enum, default_value_t = SplitArg::Train)]
    split: SplitArg,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a boosting run or a LARS-family path and print its coefficients.
    Fit {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, value_enum, default_value_t = Method::Stagewise)]
        method: Method,
        #[arg(long, default_value_t = 0.01)]
        nu: f64,
        #[arg(long, value_enum, default_value_t = Rule::Coef)]
        rule: Rule,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
    },
    /// Per-step degrees of freedom of the forward-stagewise path.
    Df {
        #[command(flatten)]
        data: DataArgs,
        /// Bootstrap replicates (0 disables the bootstrap column).
        #[arg(long, default_value_t = 0)]
        bootstrap_reps: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Noise scale for the bootstrap; estimated from the full fit if omitted.
        #[arg(long)]
        sigma: Option<f64>,
    },
    /// Reproduce one of the bundled experiments.
    Experiment {
        #[arg(long, value_enum)]
        name: ExperimentName,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
        /// Seed of the simulated Haar example.
        #[arg(long)]
        seed: Option<u64>,
        /// Directory (or file) holding the prostate data; defaults to $STAGEWISE_DATA_DIR.
        #[arg(long)]
        data_dir: Option<PathBuf>,
    },
    /// K-fold cross-validation over path steps or boosting iterations.
    Cv {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value_t = 10)]
        folds: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Method::Stagewise)]
        method: Method,
        #[arg(long, default_value_t = 0.01)]
        nu: f64,
        /// Largest step (paths) or iteration (boosting) considered.
        #[arg(long)]
        max_index: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Boost,
    Lar,
    Lasso,
    Stagewise,
}

impl Method {
    fn variant(self) -> Option<PathVariant> {
        match self {
            Method::Boost => None,
            Method::Lar => Some(PathVariant::Lar),
            Method::Lasso => Some(PathVariant::Lasso),
            Method::Stagewise => Some(PathVariant::ForwardStagewise),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    Coef,
    Sign,
}

#[derive(Clone, Copy, ValueEnum)]
enum SplitArg {
    All,
    Train,
    Test,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentName {
    Prostate,
    Haar,
    Convergence,
}

fn resolve(path: &Path) -> PathBuf {
    if path.exists() || path.is_absolute() {
        return path.to_path_buf();
    }
    match default_data_dir() {
        Some(dir) if dir.join(path).exists() => dir.join(path),
        _ => path.to_path_buf(),
    }
}

fn load(args: &DataArgs) -> Result<Dataset, Error> {
    let opts = CsvOptions {
        response: args.response.clone(),
        train_flag: args.train_flag.clone(),
        split: match (&args.train_flag, args.split) {
            (None, _) | (_, SplitArg::All) => Split::All,
            (_, SplitArg::Train) => Split::Train,
            (_, SplitArg::Test) => Split::Test,
        },
        exclude: Vec::new(),
    };
    load_csv_with(resolve(&args.data), &opts)
}

fn csv_line(cells: impl IntoIterator<Item = f64>) -> String {
    cells.into_iter().map(format_number).collect::<Vec<_>>().join(",")
}

fn fit(data: &DataArgs, method: Method, nu: f64, rule: Rule, max_iter: usize) -> Result<(), Error> {
    let d = load(data)?.drop_constant_columns()?;
    let sd = standardize(&d)?;
    match method.variant() {
        None => {
            let rule = match rule {
                Rule::Coef => UpdateRule::CoefficientStep,
                Rule::Sign => UpdateRule::SignStep,
            };
            let trace = l2boost(&sd, &BoostConfig::new(nu, rule, max_iter))?;
            let (intercept, raw) = sd.unstandardize(trace.beta());
            eprintln!(
                "iterations={} arc_length={}",
                trace.iterations(),
                format_number(trace.total_arc_length())
            );
            println!("term,coefficient");
            println!("(intercept),{}", format_number(intercept));
            for (name, b) in sd.names().iter().zip(raw.iter()) {
                println!("{name},{}", format_number(*b));
            }
        }
        Some(variant) => {
            let path = lars_path(&sd, variant)?;
            println!("k,arc_length,gamma,{}", sd.names().join(","));
            println!("{}", csv_line(std::iter::repeat_n(0.0, sd.p() + 3)));
            for (k, seg) in path.segments().iter().enumerate() {
                let mut row = vec![(k + 1) as f64, seg.arc_end, seg.gamma];
                row.extend(seg.beta_end.iter());
                println!("{}", csv_line(row));
            }
        }
    }
    Ok(())
}

fn df(data: &DataArgs, reps: usize, seed: u64, sigma: Option<f64>) -> Result<(), Error> {
    let d = load(data)?.drop_constant_columns()?;
    let sd = standardize(&d)?;
    let path = lars_path(&sd, PathVariant::ForwardStagewise)?;
    let mut table = DfTable::from_path("cli", &sd, &path, true)?;
    if reps > 0 {
        let model = PathModel {
            variant: PathVariant::ForwardStagewise,
        };
        let cfg = BootstrapConfig { sigma, reps, seed };
        let boot = bootstrap_model_df(&d, &model, path.steps(), &cfg)?;
        table = table.with_bootstrap(&boot)?;
        println!("k,df_trace,df_exact,df_bootstrap,bootstrap_se");
    } else {
        println!("k,df_trace,df_exact");
    }
    for row in &table.rows {
        let mut cells = vec![row.k as f64, row.df_trace, row.df_active as f64];
        if let Some(b) = row.df_bootstrap {
            cells.extend([b.estimate, b.std_error]);
        }
        println!("{}", csv_line(cells));
    }
    Ok(())
}

fn experiment(
    name: ExperimentName,
    out_dir: &Path,
    seed: Option<u64>,
    data_dir: Option<&Path>,
) -> Result<(), Error> {
    let report = match name {
        ExperimentName::Haar => {
            let spec = HaarSpec {
                seed: seed.unwrap_or(HaarSpec::default().seed),
                ..HaarSpec::default()
            };
            let mut report = run_example_suite("haar", &gen_haar(&spec)?)?;
            report.provenance.insert("seed".into(), spec.seed.to_string());
            report.provenance.insert("config".into(), format!("{spec:?}"));
            report
        }
        ExperimentName::Prostate => {
            let d = load_prostate(find_prostate(data_dir)?)?;
            run_example_suite("prostate", &d)?
        }
        ExperimentName::Convergence => {
            let d = load_prostate(find_prostate(data_dir)?)?;
            run_convergence("convergence", &d, &DEFAULT_NUS)?
        }
    };
    for path in report.write(out_dir)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn cv(
    data: &DataArgs,
    folds: usize,
    seed: u64,
    method: Method,
    nu: f64,
    max_index: Option<usize>,
) -> Result<(), Error> {
    let d = load(data)?;
    let result = match method.variant() {
        Some(variant) => {
            let max = max_index.unwrap_or(d.p());
            cv_select(&d, &PathModel { variant }, max, folds, seed)?
        }
        None => {
            let max = max_index.unwrap_or(1000);
            let model = BoostModel {
                config: BoostConfig::new(nu, UpdateRule::CoefficientStep, max),
            };
            cv_select(&d, &model, max, folds, seed)?
        }
    };
    eprintln!("best_index={}", result.best_index);
    println!("index,cv_mse");
    for (i, v) in result.curve.iter().enumerate() {
        println!("{}", csv_line([i as f64, *v]));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match &cli.command {
        Command::Fit {
            data,
            method,
            nu,
            rule,
            max_iter,
        } => fit(data, *method, *nu, *rule, *max_iter),
        Command::Df {
            data,
            bootstrap_reps,
            seed,
            sigma,
        } => df(data, *bootstrap_reps, *seed, *sigma),
        Command::Experiment {
            name,
            out_dir,
            seed,
            data_dir,
        } => experiment(*name, out_dir, *seed, data_dir.as_deref()),
        Command::Cv {
            data,
            folds,
            seed,
            method,
            nu,
            max_index,
        } => cv(data, *folds, *seed, *method, *nu, *max_index),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(if err.is_numerical() { 2 } else { 1 })
        }
    }
}
