use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use entroscope::alphabet::{EnumMode, Word};
use entroscope::growth::{egr_estimate, BallTable, EgrEstimate, GroupSpec};
use entroscope::metric::{dimension_estimate, greedy_cover, random_triples, DimensionEstimate};
use entroscope::nerode::{
    bounds_for, entropy_estimate, gamma_table, row, Bounds, EntropyEstimate, GammaTable,
    SuffixSet, TableConfig,
};
use entroscope::topo::{entropy_via_covers, CoverEntropy};
use entroscope::{GammaError, Language};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "entroscope", version, about = "Myhill-Nerode complexity and entropy of formal languages")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// γ(Σ^(n)) for n = 0..=n-max
    Gamma(LangArgs),
    /// Entropy estimate from the γ-table
    Entropy(LangArgs),
    /// Entropic dimension of (Σ*, d_Θ)
    Dim(LangArgs),
    /// Ball sizes and growth rate of a free or free abelian group
    Growth(GrowthArgs),
    /// Entropy via cover complexity of the truncated minimal automaton
    CoverEntropy(LangArgs),
    /// Everything above in one JSON document
    Report(LangArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct LangArgs {
    /// Language spec, e.g. `dyck:2`, `palin:ab`, `dfa:path.json`, `not(...)`
    #[arg(long)]
    lang: String,
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
    n_max: u64,
    /// Brute-force prefix length bound (default 2n + 2)
    #[arg(long)]
    prefix_bound: Option<usize>,
    /// `upto` for Σ^(n), `exact` for Σⁿ
    #[arg(long, default_value = "upto")]
    mode: EnumMode,
    /// Membership-query budget for the whole command
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
    /// Seed for sampled checks
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Skip row certificates and always brute-force
    #[arg(long)]
    brute_force: bool,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct GrowthArgs {
    /// `free:K` or `abelian:K`
    #[arg(long, required_unless_present = "lang")]
    group: Option<String>,
    /// Use the group of a language's homomorphism instead
    #[arg(long, conflicts_with = "group")]
    lang: Option<String>,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    n_max: u64,
    /// Cap on stored group elements
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

enum Failure {
    Input(String),
    Internal(String),
}

struct Output {
    text: String,
    partial: bool,
}

type Outcome = Result<Output, Failure>;

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn json<T: Serialize>(doc: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(doc)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Failure::Internal(e.to_string()))
}

fn csv_rows<R: Serialize>(rows: impl IntoIterator<Item = R>, trailer: &[String]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Failure::Internal(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Internal(e.to_string()))?;
    let mut text = String::from_utf8(bytes).map_err(|e| Failure::Internal(e.to_string()))?;
    for line in trailer {
        text.push_str("# ");
        text.push_str(line);
        text.push('\n');
    }
    Ok(text)
}

impl LangArgs {
    fn language(&self) -> Result<Language, Failure> {
        Language::parse(&self.lang).map_err(input)
    }

    fn n_max(&self) -> usize {
        self.n_max as usize
    }

    fn config(&self, budget: u64) -> TableConfig {
        TableConfig {
            mode: self.mode,
            prefix_bound: self.prefix_bound,
            window: 2,
            budget: Some(budget),
            use_certificates: !self.brute_force,
        }
    }

    fn table(&self, lang: &Language) -> GammaTable {
        gamma_table(lang, self.n_max(), self.config(self.budget))
    }

    fn needs_records(&self) -> Result<(), Failure> {
        if self.n_max < 4 {
            return Err(Failure::Input(format!(
                "entropy estimates need --n-max >= 4, got {}",
                self.n_max
            )));
        }
        Ok(())
    }

    fn needs_upto(&self) -> Result<(), Failure> {
        match self.mode {
            EnumMode::UpTo => Ok(()),
            EnumMode::Exact => Err(Failure::Input("the metric uses --mode upto".into())),
        }
    }
}

#[derive(Serialize)]
struct Meta<'a> {
    command: &'a str,
    version: &'a str,
    budget: u64,
}

fn meta(command: &'static str, budget: u64) -> Meta<'static> {
    Meta {
        command,
        version: VERSION,
        budget,
    }
}

/// An estimate, or why there is none.
fn estimate(table: &GammaTable) -> (Option<EntropyEstimate>, Option<String>) {
    match entropy_estimate(table) {
        Ok(e) => (Some(e), None),
        Err(e) => (None, Some(e.to_string())),
    }
}

fn cmd_gamma(a: &LangArgs) -> Outcome {
    let lang = a.language()?;
    let table = a.table(&lang);
    let text = match a.format.unwrap_or(Format::Json) {
        Format::Csv => {
            let mut s = table.to_csv();
            s.push_str(&format!(
                "# language={} budget={} queries={} partial={}\n",
                table.language, a.budget, table.queries, table.partial
            ));
            s
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                #[serde(flatten)]
                meta: Meta<'a>,
                #[serde(flatten)]
                table: &'a GammaTable,
            }
            json(&Doc {
                meta: meta("gamma", a.budget),
                table: &table,
            })?
        }
    };
    Ok(Output {
        text,
        partial: table.partial,
    })
}

fn cmd_entropy(a: &LangArgs) -> Outcome {
    let lang = a.language()?;
    a.needs_records()?;
    let table = a.table(&lang);
    let (entropy, entropy_error) = estimate(&table);
    if entropy.is_none() && !table.partial {
        return Err(Failure::Internal(entropy_error.unwrap_or_default()));
    }
    let text = match a.format.unwrap_or(Format::Json) {
        Format::Csv => {
            #[derive(Serialize)]
            struct Line {
                n: usize,
                gamma: u64,
                a_n: f64,
            }
            let rows = table.records.iter().filter(|r| r.n >= 1).map(|r| Line {
                n: r.n,
                gamma: r.gamma,
                a_n: (r.gamma as f64).log2() / r.n as f64,
            });
            let trailer = match &entropy {
                Some(e) => vec![
                    format!("slope={} tail_max={} tail_start={}", e.slope, e.tail_max, e.tail_start),
                    format!("verdict={}", e.verdict),
                ],
                None => vec![format!("no estimate: {}", entropy_error.clone().unwrap_or_default())],
            };
            let mut t = trailer;
            t.push(format!("budget={} queries={} partial={}", a.budget, table.queries, table.partial));
            csv_rows(rows, &t)?
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                #[serde(flatten)]
                meta: Meta<'a>,
                #[serde(flatten)]
                table: &'a GammaTable,
                entropy: Option<EntropyEstimate>,
                entropy_error: Option<String>,
            }
            json(&Doc {
                meta: meta("entropy", a.budget),
                table: &table,
                entropy,
                entropy_error,
            })?
        }
    };
    Ok(Output {
        text,
        partial: table.partial,
    })
}

#[derive(Serialize)]
struct SpotCheck {
    n: usize,
    sample: usize,
    /// Greedy cover by open balls of radius 2⁻ⁿ.
    cover: usize,
    /// Distinct Σ^(n) rows in the sample.
    rows: usize,
    agrees: bool,
}

/// The covering identity on a seeded random sample: the greedy cover at
/// radius `2⁻ⁿ` has one centre per distinct row.
fn spot_checks(lang: &Language, n_max: usize, seed: u64) -> Vec<SpotCheck> {
    let sample: Vec<Word> = random_triples(lang.alphabet(), 32, 2 * n_max + 2, seed)
        .into_iter()
        .flat_map(|(x, y, z)| [x, y, z])
        .collect();
    (0..=n_max.min(4))
        .map(|n| {
            let f = SuffixSet::new(lang.alphabet(), n, EnumMode::UpTo);
            let mut rows: Vec<_> = sample.iter().map(|w| row(lang, &w.0, &f)).collect();
            rows.sort_by(|a, b| format!("{a:?}").cmp(&format!("{b:?}")));
            rows.dedup();
            let cover = greedy_cover(lang, &sample, n);
            SpotCheck {
                n,
                sample: sample.len(),
                cover,
                rows: rows.len(),
                agrees: cover == rows.len(),
            }
        })
        .collect()
}

fn cmd_dim(a: &LangArgs) -> Outcome {
    let lang = a.language()?;
    a.needs_records()?;
    a.needs_upto()?;
    let table = a.table(&lang);
    let (dimension, dimension_error) = match dimension_estimate(&table) {
        Ok(d) => (Some(d), None),
        Err(e) if table.partial => (None, Some(e.to_string())),
        Err(e) => return Err(Failure::Internal(e.to_string())),
    };
    let checks = spot_checks(&lang, a.n_max(), a.seed);
    let text = match a.format.unwrap_or(Format::Json) {
        Format::Csv => {
            let rows = dimension.iter().flat_map(|d| d.per_n.iter());
            let mut t = Vec::new();
            if let Some(d) = &dimension {
                t.push(format!(
                    "slope={} tail_max={} verdict={} matches_entropy={}",
                    d.slope, d.tail_max, d.verdict, d.matches_entropy
                ));
            }
            for c in &checks {
                t.push(format!("spot n={} cover={} rows={} agrees={}", c.n, c.cover, c.rows, c.agrees));
            }
            t.push(format!(
                "seed={} budget={} queries={} partial={}",
                a.seed, a.budget, table.queries, table.partial
            ));
            csv_rows(rows, &t)?
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                #[serde(flatten)]
                meta: Meta<'a>,
                language: &'a str,
                seed: u64,
                queries: u64,
                partial: bool,
                gamma: Vec<u64>,
                dimension: Option<DimensionEstimate>,
                dimension_error: Option<String>,
                spot_checks: Vec<SpotCheck>,
            }
            json(&Doc {
                meta: meta("dim", a.budget),
                language: &table.language,
                seed: a.seed,
                queries: table.queries,
                partial: table.partial,
                gamma: table.gammas(),
                dimension,
                dimension_error,
                spot_checks: checks,
            })?
        }
    };
    Ok(Output {
        text,
        partial: table.partial,
    })
}

#[derive(Serialize)]
struct Growth {
    #[serde(flatten)]
    table: BallTable,
    closed_form: Vec<u128>,
    egr: EgrEstimate,
    /// Radii beyond the last reported one did not fit under the element cap.
    partial: bool,
}

/// Ball table up to the largest radius that fits under `cap`.
fn growth(group: GroupSpec, n_max: usize, cap: usize) -> Growth {
    let mut best = group.ball_table(0, cap).expect("the identity fits any cap");
    let mut partial = false;
    for n in 1..=n_max {
        match group.ball_table(n, cap) {
            Ok(t) => best = t,
            Err(_) => {
                partial = true;
                break;
            }
        }
    }
    let closed_form = (0..=best.n_max()).map(|n| group.closed_form_ball(n)).collect();
    let egr = egr_estimate(&best);
    Growth {
        table: best,
        closed_form,
        egr,
        partial,
    }
}

fn cmd_growth(a: &GrowthArgs) -> Outcome {
    let group = match (&a.group, &a.lang) {
        (Some(g), _) => GroupSpec::parse(g).map_err(input)?,
        (None, Some(l)) => {
            let lang = Language::parse(l).map_err(input)?;
            lang.homomorphism()
                .ok_or_else(|| Failure::Input(format!("{lang} has no group homomorphism")))?
                .group
        }
        (None, None) => return Err(Failure::Input("need --group or --lang".into())),
    };
    let g = growth(group, a.n_max as usize, a.budget as usize);
    let text = match a.format {
        Format::Csv => {
            #[derive(Serialize)]
            struct Line {
                n: usize,
                ball: u64,
                log2_ratio: Option<f64>,
            }
            let rows = g.table.sizes.iter().zip(&g.table.ratios).enumerate().map(|(n, (&ball, &r))| Line {
                n,
                ball,
                log2_ratio: r,
            });
            let mut t = vec![format!("closed-form limit: {}", group.growth_limit())];
            if g.partial {
                t.push(format!("partial: element cap {} reached", a.budget));
            }
            csv_rows(rows, &t)?
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                #[serde(flatten)]
                meta: Meta<'a>,
                #[serde(flatten)]
                growth: &'a Growth,
            }
            json(&Doc {
                meta: meta("growth", a.budget),
                growth: &g,
            })?
        }
    };
    Ok(Output {
        text,
        partial: g.partial,
    })
}

#[derive(Serialize)]
struct CoverCheck {
    cover: Option<CoverEntropy>,
    /// γ from the nerode table, for comparison with the cover counts.
    gamma: Vec<u64>,
    matches_gamma: Option<bool>,
    queries: u64,
    partial: bool,
    error: Option<String>,
}

fn cover_check(lang: &Language, a: &LangArgs, n_max: usize, budget: u64) -> CoverCheck {
    let p = a.prefix_bound.unwrap_or(2 * n_max + 2);
    let cfg = TableConfig {
        mode: EnumMode::UpTo,
        prefix_bound: Some(p),
        ..a.config(budget)
    };
    let table = gamma_table(lang, n_max, cfg);
    let left = budget.saturating_sub(table.queries);
    match entropy_via_covers(lang, n_max, p, Some(left)) {
        Ok(c) => {
            let counts: Vec<u64> = c.per_n.iter().map(|x| x.count).collect();
            CoverCheck {
                matches_gamma: (!table.partial).then(|| counts == table.gammas()),
                gamma: table.gammas(),
                queries: table.queries + c.queries,
                partial: table.partial,
                cover: Some(c),
                error: None,
            }
        }
        Err(e) => {
            let used = match &e {
                GammaError::Budget { partial } => partial.queries,
                _ => 0,
            };
            CoverCheck {
                cover: None,
                gamma: table.gammas(),
                matches_gamma: None,
                queries: table.queries + used,
                partial: true,
                error: Some(e.to_string()),
            }
        }
    }
}

fn cmd_cover(a: &LangArgs) -> Outcome {
    let lang = a.language()?;
    a.needs_upto()?;
    let c = cover_check(&lang, a, a.n_max(), a.budget);
    let text = match a.format.unwrap_or(Format::Json) {
        Format::Csv => {
            #[derive(Serialize)]
            struct Line {
                n: usize,
                count: u64,
                a_n: Option<f64>,
                gamma: Option<u64>,
            }
            let rows = c.cover.iter().flat_map(|cv| cv.per_n.iter()).map(|x| Line {
                n: x.n,
                count: x.count,
                a_n: x.a_n,
                gamma: c.gamma.get(x.n).copied(),
            });
            let mut t = Vec::new();
            if let Some(cv) = &c.cover {
                t.push(format!("saturated={} prefix_bound={}", cv.saturated, cv.prefix_bound));
            }
            if let Some(m) = c.matches_gamma {
                t.push(format!("matches_gamma={m}"));
            }
            if let Some(e) = &c.error {
                t.push(format!("error: {e}"));
            }
            t.push(format!("budget={} queries={} partial={}", a.budget, c.queries, c.partial));
            csv_rows(rows, &t)?
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                #[serde(flatten)]
                meta: Meta<'a>,
                language: String,
                #[serde(flatten)]
                check: &'a CoverCheck,
            }
            json(&Doc {
                meta: meta("cover-entropy", a.budget),
                language: lang.to_string(),
                check: &c,
            })?
        }
    };
    Ok(Output {
        text,
        partial: c.partial,
    })
}

fn cmd_report(a: &LangArgs) -> Outcome {
    let lang = a.language()?;
    if a.format == Some(Format::Csv) {
        return Err(Failure::Input("report is JSON only".into()));
    }
    let table = a.table(&lang);
    let (entropy, entropy_error) = estimate(&table);
    let dimension = match a.mode {
        EnumMode::UpTo => dimension_estimate(&table).ok(),
        EnumMode::Exact => None,
    };
    let spot = match a.mode {
        EnumMode::UpTo => spot_checks(&lang, a.n_max(), a.seed),
        EnumMode::Exact => Vec::new(),
    };
    let left = a.budget.saturating_sub(table.queries);
    let cover = (a.mode == EnumMode::UpTo).then(|| cover_check(&lang, a, a.n_max().min(4), left));
    let growth = lang
        .homomorphism()
        .map(|h| growth(h.group, a.n_max(), a.budget as usize));
    let partial = table.partial || cover.as_ref().is_some_and(|c| c.partial);

    #[derive(Serialize)]
    struct Doc<'a> {
        #[serde(flatten)]
        meta: Meta<'a>,
        seed: u64,
        table: &'a GammaTable,
        bounds: Option<Bounds>,
        entropy: Option<EntropyEstimate>,
        entropy_error: Option<String>,
        dimension: Option<DimensionEstimate>,
        spot_checks: Vec<SpotCheck>,
        cover_entropy: Option<CoverCheck>,
        growth: Option<Growth>,
        queries: u64,
        partial: bool,
    }
    let queries = table.queries + cover.as_ref().map_or(0, |c| c.queries);
    let text = json(&Doc {
        meta: meta("report", a.budget),
        seed: a.seed,
        bounds: bounds_for(&lang, a.n_max(), a.mode),
        table: &table,
        entropy,
        entropy_error,
        dimension,
        spot_checks: spot,
        cover_entropy: cover,
        growth,
        queries,
        partial,
    })?;
    Ok(Output { text, partial })
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("ENTROSCOPE_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Failure::Input(format!("ENTROSCOPE_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Internal(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match &cli.command {
        Command::Gamma(a) => cmd_gamma(a),
        Command::Entropy(a) => cmd_entropy(a),
        Command::Dim(a) => cmd_dim(a),
        Command::Growth(a) => cmd_growth(a),
        Command::CoverEntropy(a) => cmd_cover(a),
        Command::Report(a) => cmd_report(a),
    });
    match result {
        Ok(out) => {
            print!("{}", out.text);
            if out.partial {
                eprintln!("entroscope: budget exhausted, results are partial");
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("entroscope: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("entroscope: internal error: {msg}");
            ExitCode::from(1)
        }
    }
}
