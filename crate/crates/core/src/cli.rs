//! The `apsidon` command line.
//!
//! Exit codes: 0 success, 1 mathematical negative or search failure,
//! 2 usage or parse error. Machine output renders every rational as `p/q`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::construct::{
    build_chain, check_affine_copy, find_affine_copy, find_progression, verify_kernel, AffineCheck, ChainError,
    ConstraintSpec, KernelCounterexample,
};
use crate::epoly::{bnorm2_sq, bnorm4_pow4, sidon_bound_pow4, EPolynomial};
use crate::error::Error;
use crate::lemma3::{fat_cantor, find_patterned_ap, gap_probes, IntervalUnion, Pattern};
use crate::mappings::{cantor_eval, Mapping, NonlinearityClass};
use crate::rational::{self, Rational};
use crate::search::{SamplingMode, SearchBox, SearchConfig, SearchFailure, DEFAULT_BUDGET, DEFAULT_DENOM_BOUND};
use crate::sets::{
    count_quadruples, dirichlet_gamma4_pow4, dirichlet_ratio_pow4, gamma, is_sidon, sidon_energy, sidon_witness,
    FiniteSet,
};

pub const EXPERIMENTAL_LABEL: &str = "experimental (open question)";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "apsidon", version, about = "Progressions mapped onto sets with distinct sums of pairs")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Seed for every randomized search.
    #[arg(long, global = true, env = "APSIDON_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Candidates per search.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Largest progression length (chain commands) or table size (growth).
    #[arg(long = "n-max", global = true)]
    pub n_max: Option<usize>,
    /// Search box as `x0,x1,y0,y1`.
    #[arg(long = "box", global = true)]
    pub search_box: Option<String>,
    /// Largest denominator of sampled rationals.
    #[arg(long = "denom-bound", global = true, default_value_t = DEFAULT_DENOM_BOUND)]
    pub denom_bound: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Decimal places for rendered roots.
    #[arg(long, global = true, default_value_t = 12)]
    pub digits: u32,
}

#[derive(Args, Debug, Clone)]
pub struct SetInput {
    /// Inline comma-separated rationals.
    #[arg(long, conflicts_with = "file")]
    pub set: Option<String>,
    /// JSON file `{"elements": [...]}`.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether a finite set has distinct sums of pairs.
    CheckSidon(SetInput),
    /// Print γ(M) = {0} ∪ M ∪ (M+M) ∪ (M−M) ∪ (M+M−M).
    Gamma(SetInput),
    /// Count ordered solutions of l1 + l2 = l3 + l4.
    Energy(SetInput),
    /// Exact B² and B⁴ norm powers of an exponential sum.
    Bnorm {
        /// JSON file `{"terms": [{"freq", "re", "im"}, ...]}`.
        #[arg(long, conflicts_with = "set")]
        file: Option<PathBuf>,
        /// Unit coefficients on these frequencies.
        #[arg(long)]
        set: Option<String>,
    },
    /// Table of γ₄(N)⁴ against the Sidon reference 2N² − N.
    Growth,
    /// Search one admissible progression.
    FindProgression {
        #[arg(long)]
        phi: String,
        /// Progression length N (at least 4).
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Forbidden values S.
        #[arg(long, default_value = "0")]
        forbidden: String,
        /// Walk the dyadic grid instead of sampling.
        #[arg(long)]
        grid: bool,
    },
    /// Build the chain A_4, …, A_{n-max}.
    BuildChain {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        grid: bool,
    },
    /// Exhaustive check of the power-matrix and kernel claims.
    VerifyKernel {
        #[arg(long = "k", default_value_t = 20)]
        k_max: u32,
    },
    /// Check or search an affine copy aZ + b mapped onto a Sidon set.
    AffineCopy {
        #[arg(long)]
        phi: String,
        /// Window half-width K (k = −K..K).
        #[arg(long, default_value_t = 3)]
        window: i64,
        #[arg(long, requires = "b", allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long, requires = "a", allow_hyphen_values = true)]
        b: Option<String>,
    },
    /// Progression with terms in the interiors of two interval unions.
    Lemma3Search {
        /// E1 as `l,r;l,r;...`.
        #[arg(long, requires = "e2", conflicts_with = "fat_cantor")]
        e1: Option<String>,
        #[arg(long, requires = "e1")]
        e2: Option<String>,
        /// Use E1 = fat Cantor stage m and E2 = its gap probes.
        #[arg(long = "fat-cantor")]
        fat_cantor: Option<u32>,
        /// Pattern such as `1,2,1`.
        #[arg(long, conflicts_with = "alternating")]
        pattern: Option<String>,
        /// Alternating pattern of length N.
        #[arg(long)]
        alternating: Option<usize>,
    },
    /// Cantor staircase evaluation and chain experiment.
    CantorExperiment {
        /// Points to evaluate, comma separated.
        #[arg(long)]
        at: Option<String>,
        /// Skip the chain experiment.
        #[arg(long)]
        no_chain: bool,
    },
}

/// Validated run parameters shared by the search commands.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub budget: u64,
    pub denom_bound: u64,
    #[serde(rename = "box")]
    pub search_box: String,
    pub n_max: usize,
    pub output_format: OutputFormat,
    pub digits: u32,
}

impl RunConfig {
    fn from_args(g: &GlobalArgs, default_n_max: usize, default_box: &str) -> Result<Self, Error> {
        let cfg = RunConfig {
            seed: g.seed,
            budget: g.budget,
            denom_bound: g.denom_bound,
            search_box: g.search_box.clone().unwrap_or_else(|| default_box.to_string()),
            n_max: g.n_max.unwrap_or(default_n_max),
            output_format: g.format,
            digits: g.digits,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.budget < 1 {
            return Err(Error::Precondition("--budget must be at least 1".into()));
        }
        if self.denom_bound < 2 {
            return Err(Error::Precondition("--denom-bound must be at least 2".into()));
        }
        if self.n_max < 4 {
            return Err(Error::Precondition("--n-max must be at least 4".into()));
        }
        if self.digits < 1 {
            return Err(Error::Precondition("--digits must be at least 1".into()));
        }
        SearchBox::parse(&self.search_box)?;
        Ok(())
    }

    pub fn search_config(&self, mode: SamplingMode) -> SearchConfig {
        SearchConfig::new(self.budget, self.seed)
            .with_denom_bound(self.denom_bound)
            .with_box(SearchBox::parse(&self.search_box).expect("validated"))
            .with_mode(mode)
    }
}

/// What a CLI invocation printed and how it exited.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: impl std::fmt::Display) -> Self {
        Outcome { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }
}

struct Report {
    code: i32,
    json: Value,
    text: String,
    csv: Option<String>,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: rendered, stderr: String::new() }
                }
                _ => Outcome { code: 2, stdout: String::new(), stderr: rendered },
            };
        }
    };
    let format = cli.global.format;
    match dispatch(&cli) {
        Ok(report) => {
            let stdout = match format {
                OutputFormat::Json => {
                    let mut s = serde_json::to_string_pretty(&report.json).expect("json values serialize");
                    s.push('\n');
                    s
                }
                OutputFormat::Text => report.text,
                OutputFormat::Csv => match report.csv {
                    Some(c) => c,
                    None => return Outcome::usage("--format csv is not available for this command"),
                },
            };
            Outcome { code: report.code, stdout, stderr: String::new() }
        }
        Err(e) => Outcome::usage(e),
    }
}

fn read_file(path: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Malformed(format!("cannot read {}: {e}", path.display())))
}

fn load_set(input: &SetInput) -> Result<FiniteSet, Error> {
    match (&input.set, &input.file) {
        (Some(s), _) => FiniteSet::parse(s),
        (None, Some(f)) => serde_json::from_str(&read_file(f)?).map_err(|e| Error::Malformed(e.to_string())),
        (None, None) => Err(Error::Malformed("give --set or --file".into())),
    }
}

fn q(r: &Rational) -> String {
    rational::format(r)
}

fn search_failure_json(f: &SearchFailure) -> Value {
    serde_json::to_value(f).expect("failure serializes")
}

fn dispatch(cli: &Cli) -> Result<Report, Error> {
    let g = &cli.global;
    if g.digits < 1 {
        return Err(Error::Precondition("--digits must be at least 1".into()));
    }
    match &cli.command {
        Command::CheckSidon(input) => {
            let set = load_set(input)?;
            let witness = sidon_witness(&set);
            let sidon = witness.is_none();
            debug_assert_eq!(sidon, is_sidon(&set));
            let wit_strings = witness.as_ref().map(|w| w.values.iter().map(q).collect::<Vec<_>>());
            let text = match &witness {
                None => format!("{set} has distinct sums of pairs\n"),
                Some(w) => format!(
                    "{set} is not Sidon: {} + {} = {} + {}\n",
                    w.values[0], w.values[1], w.values[2], w.values[3]
                ),
            };
            let csv =
                format!("sidon,witness\n{},{}\n", sidon, wit_strings.as_ref().map(|w| w.join(" ")).unwrap_or_default());
            Ok(Report {
                code: if sidon { 0 } else { 1 },
                json: json!({"set": set, "sidon": sidon, "witness": wit_strings}),
                text,
                csv: Some(csv),
            })
        }
        Command::Gamma(input) => {
            let set = load_set(input)?;
            let g = gamma(&set);
            let mut csv = String::from("value\n");
            for e in g.iter() {
                let _ = writeln!(csv, "{e}");
            }
            Ok(Report {
                code: 0,
                text: format!("gamma has {} elements: {g}\n", g.len()),
                json: json!({"input": set, "gamma": g, "size": g.len()}),
                csv: Some(csv),
            })
        }
        Command::Energy(input) => {
            let set = load_set(input)?;
            let energy = count_quadruples(&set);
            let reference = sidon_energy(set.len());
            let sidon = energy == reference;
            Ok(Report {
                code: 0,
                text: format!("energy {energy} (Sidon reference {reference}, sidon = {sidon})\n"),
                json: json!({"size": set.len(), "energy": energy.to_string(), "sidon_reference": reference.to_string(), "sidon": sidon}),
                csv: Some(format!("size,energy,sidon_reference,sidon\n{},{energy},{reference},{sidon}\n", set.len())),
            })
        }
        Command::Bnorm { file, set } => {
            let poly = match (file, set) {
                (Some(f), _) => {
                    serde_json::from_str::<EPolynomial>(&read_file(f)?).map_err(|e| Error::Malformed(e.to_string()))?
                }
                (None, Some(s)) => EPolynomial::unit(&FiniteSet::parse(s)?),
                (None, None) => return Err(Error::Malformed("give --file or --set".into())),
            };
            let b2 = bnorm2_sq(&poly);
            let b4 = bnorm4_pow4(&poly);
            let bound = sidon_bound_pow4(&poly);
            let sidon_support = is_sidon(&poly.support());
            let two_b2_sq = rational::int(2) * &b2 * &b2;
            let d = g.digits;
            let n2 = rational::decimal_root(&b2, 2, d);
            let n4 = rational::decimal_root(&b4, 4, d);
            Ok(Report {
                code: 0,
                json: json!({
                    "bnorm2_sq": q(&b2),
                    "bnorm4_pow4": q(&b4),
                    "sidon_support": sidon_support,
                    "sidon_identity_value": q(&bound),
                    "within_2_pow_quarter": b4 <= two_b2_sq,
                    "bnorm2": n2,
                    "bnorm4": n4,
                }),
                text: format!(
                    "|f|_B2^2 = {b2}\n|f|_B4^4 = {b4}\n|f|_B2 ~ {n2}\n|f|_B4 ~ {n4}\nsidon support: {sidon_support}\n"
                ),
                csv: Some(format!("bnorm2_sq,bnorm4_pow4,bnorm2,bnorm4\n{b2},{b4},{n2},{n4}\n")),
            })
        }
        Command::Growth => {
            let n_max = g.n_max.unwrap_or(20);
            if n_max < 1 {
                return Err(Error::Precondition("--n-max must be at least 1".into()));
            }
            let mut rows = Vec::with_capacity(n_max);
            let mut csv = String::from("N,gamma4_pow4,ratio,sidon_reference\n");
            let mut text = String::new();
            for n in 1..=n_max as u64 {
                let e = dirichlet_gamma4_pow4(n)?;
                let ratio = rational::decimal_root(&dirichlet_ratio_pow4(n)?, 4, g.digits);
                let reference = sidon_energy(n as usize);
                let _ = writeln!(csv, "{n},{e},{ratio},{reference}");
                let _ =
                    writeln!(text, "N = {n:>6}  gamma4^4 = {e:>14}  gamma4/N^(3/4) = {ratio}  2N^2-N = {reference}");
                rows.push(json!({"N": n, "gamma4_pow4": e.to_string(), "ratio": ratio, "sidon_reference": reference.to_string()}));
            }
            Ok(Report { code: 0, json: json!({"rows": rows}), text, csv: Some(csv) })
        }
        Command::FindProgression { phi, n, forbidden, grid } => {
            let cfg = RunConfig::from_args(g, 4, "0,1,1,2")?;
            let phi = Mapping::parse_spec(phi)?;
            let spec = ConstraintSpec::new(*n, FiniteSet::parse(forbidden)?)?;
            let mode = if *grid { SamplingMode::Grid } else { SamplingMode::Random };
            let config_json = serde_json::to_value(&cfg).expect("config serializes");
            match find_progression(&phi, &spec, &cfg.search_config(mode)) {
                Ok(found) => {
                    let p = &found.value;
                    let image: Vec<String> = p.image_values(&phi).iter().map(q).collect();
                    Ok(Report {
                        code: 0,
                        text: format!("found {p}\nimage: {}\n", image.join(", ")),
                        json: json!({"phi": phi, "x": q(p.x()), "y": q(p.y()), "n": p.len(), "image": image,
                                     "candidates_tried": found.candidates_tried, "config": config_json}),
                        csv: None,
                    })
                }
                Err(f) => Ok(Report {
                    code: 1,
                    text: format!("{f}\n"),
                    json: json!({"phi": phi, "failure": search_failure_json(&f), "config": config_json}),
                    csv: None,
                }),
            }
        }
        Command::BuildChain { phi, grid } => {
            let cfg = RunConfig::from_args(g, 6, "0,1,1,2")?;
            let phi = Mapping::parse_spec(phi)?;
            let mode = if *grid { SamplingMode::Grid } else { SamplingMode::Random };
            chain_report(&phi, &cfg, mode, true)
        }
        Command::VerifyKernel { k_max } => {
            if *k_max < 4 {
                return Err(Error::Precondition("--k must be at least 4".into()));
            }
            let r = verify_kernel(*k_max);
            let text = match r.counterexamples.first() {
                None => format!("K = {}: {} tuples x 7 vectors, no counterexample\n", r.k_max, r.tuples_checked),
                Some(KernelCounterexample::Vandermonde { k }) => format!("singular power matrix at k = {k:?}\n"),
                Some(KernelCounterexample::Kernel { k, v_index }) => format!("v{v_index} in ker M({k:?})\n"),
            };
            Ok(Report {
                code: if r.passed() { 0 } else { 1 },
                csv: Some(format!(
                    "K,tuples_checked,counterexamples\n{},{},{}\n",
                    r.k_max,
                    r.tuples_checked,
                    r.counterexamples.len()
                )),
                json: serde_json::to_value(&r).expect("report serializes"),
                text,
            })
        }
        Command::AffineCopy { phi, window, a, b } => {
            let cfg = RunConfig::from_args(g, 4, "0,1,1,2")?;
            let phi = Mapping::parse_spec(phi)?;
            if *window < 1 {
                return Err(Error::Precondition("--window must be at least 1".into()));
            }
            if let (Some(a), Some(b)) = (a, b) {
                let (a, b) = (rational::parse(a)?, rational::parse(b)?);
                if num::Zero::is_zero(&a) {
                    return Err(Error::Precondition("a must be nonzero".into()));
                }
                return Ok(match check_affine_copy(&phi, &a, &b, *window) {
                    AffineCheck::Holds => Report {
                        code: 0,
                        text: format!("phi is injective on {a}k + {b}, |k| <= {window}, with Sidon image\n"),
                        json: json!({"a": q(&a), "b": q(&b), "window": window, "holds": true}),
                        csv: None,
                    },
                    AffineCheck::Fails(r) => Report {
                        code: 1,
                        text: format!("fails: {r}\n"),
                        json: json!({"a": q(&a), "b": q(&b), "window": window, "holds": false, "reason": r}),
                        csv: None,
                    },
                });
            }
            let config_json = serde_json::to_value(&cfg).expect("config serializes");
            Ok(match find_affine_copy(&phi, *window, &cfg.search_config(SamplingMode::Random)) {
                Ok(found) => Report {
                    code: 0,
                    text: format!("a = {}, b = {}\n", found.value.a, found.value.b),
                    json: json!({"copy": found.value, "candidates_tried": found.candidates_tried, "config": config_json}),
                    csv: None,
                },
                Err(f) => Report {
                    code: 1,
                    text: format!("{f}\n"),
                    json: json!({"failure": search_failure_json(&f), "config": config_json}),
                    csv: None,
                },
            })
        }
        Command::Lemma3Search { e1, e2, fat_cantor: stage, pattern, alternating } => {
            let (u1, u2) = match (e1, e2, stage) {
                (Some(a), Some(b), _) => (IntervalUnion::parse(a)?, IntervalUnion::parse(b)?),
                (_, _, Some(m)) => (fat_cantor(*m), gap_probes(*m)),
                _ => return Err(Error::Malformed("give --e1/--e2 or --fat-cantor".into())),
            };
            let pat = match (pattern, alternating) {
                (Some(p), _) => Pattern::parse(p)?,
                (None, Some(n)) => Pattern::alternating(*n)?,
                (None, None) => return Err(Error::Malformed("give --pattern or --alternating".into())),
            };
            if g.budget < 1 {
                return Err(Error::Precondition("--budget must be at least 1".into()));
            }
            let cfg = SearchConfig::new(g.budget, g.seed).with_denom_bound(g.denom_bound);
            let sets = json!({"e1": u1, "e2": u2, "pattern": pat});
            Ok(match find_patterned_ap(&u1, &u2, &pat, &cfg) {
                Ok(found) => Report {
                    code: 0,
                    text: format!("x = {}, y = {}\n", found.value.x, found.value.y),
                    json: json!({"witness": found.value, "candidates_tried": found.candidates_tried, "instance": sets, "seed": g.seed}),
                    csv: None,
                },
                Err(f) => Report {
                    code: 1,
                    text: format!("{f}\n"),
                    json: json!({"failure": search_failure_json(&f), "instance": sets, "seed": g.seed}),
                    csv: None,
                },
            })
        }
        Command::CantorExperiment { at, no_chain } => {
            let mut evaluations = Vec::new();
            let mut csv = String::from("t,cantor\n");
            let mut text = String::new();
            if let Some(pts) = at {
                for t in rational::parse_list(pts)? {
                    let c = cantor_eval(&t)?;
                    let _ = writeln!(csv, "{t},{c}");
                    let _ = writeln!(text, "c({t}) = {c}");
                    evaluations.push(json!({"t": q(&t), "value": q(&c)}));
                }
            }
            let mut out = json!({"label": EXPERIMENTAL_LABEL, "evaluations": evaluations});
            if !no_chain {
                let n_max = g.n_max.unwrap_or(5);
                // keep progressions inside [0, 1]: x in [0, 1/2], y in [0, 1/(2 n_max)]
                let default_box = format!("0,1/2,0,1/{}", 2 * n_max);
                let cfg = RunConfig::from_args(g, 5, &default_box)?;
                let chain = chain_report(&Mapping::Cantor, &cfg, SamplingMode::Random, false)?;
                out["chain_experiment"] = chain.json;
                text.push_str(&chain.text);
            }
            Ok(Report { code: 0, json: out, text, csv: Some(csv) })
        }
    }
}

fn chain_report(phi: &Mapping, cfg: &RunConfig, mode: SamplingMode, strict: bool) -> Result<Report, Error> {
    let class = phi.nonlinearity_class();
    let experimental = class == NonlinearityClass::NowhereDenseNull;
    let config_json = serde_json::to_value(cfg).expect("config serializes");
    let mut text = String::new();
    if experimental {
        let _ = writeln!(text, "[{EXPERIMENTAL_LABEL}]");
    }
    match build_chain(phi, cfg.n_max, &cfg.search_config(mode)) {
        Ok(state) => {
            let mut v = serde_json::to_value(&state).expect("chain serializes");
            v["status"] = json!("ok");
            v["nonlinearity_class"] = json!(class);
            v["config"] = config_json;
            if experimental {
                v["label"] = json!(EXPERIMENTAL_LABEL);
            }
            for st in state.stages() {
                let image: Vec<String> = st.progression.image_values(phi).iter().map(q).collect();
                let _ = writeln!(text, "n = {}: {}  ->  {}", st.n(), st.progression, image.join(", "));
            }
            let _ = writeln!(
                text,
                "union of images: {} elements, Sidon; gamma size {}",
                state.union().len(),
                state.forbidden().len()
            );
            Ok(Report { code: 0, json: v, text, csv: None })
        }
        Err(ChainError::Search(f)) => {
            let _ = writeln!(text, "{f}");
            let mut v = json!({
                "status": "search_failure",
                "phi": phi,
                "nonlinearity_class": class,
                "failure": search_failure_json(&f),
                "seed": cfg.seed,
                "config": config_json,
            });
            if experimental {
                v["label"] = json!(EXPERIMENTAL_LABEL);
            }
            Ok(Report { code: if strict { 1 } else { 0 }, json: v, text, csv: None })
        }
        Err(ChainError::Internal(e)) => Err(e),
    }
}
