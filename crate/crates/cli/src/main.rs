use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gridramsey::bounds::{
    delta_certificate, delta_sequence, epsilon, epsilon_certificate, epsilon_sequence,
    gamma_certificate, gamma_sequence, guaranteed_count_lower_bound, hereditary_certificate,
    hereditary_check, hereditary_constant, lll_volume_threshold, minimal_coloring,
    mu_colorable_certificate, mu_guarantee_certificate, mu_lower_bound_holds, mu_sequence,
    pigeonhole_certificate, pinch_points, virtual_color_count, volume_sandwich, PinchRule,
};
use gridramsey::pipeline::{a3_table, obstruction_count_exponent};
use gridramsey::qform::{build_matrix, coloring_from_vector, min_rectangles, spectrum};
use gridramsey::search::{
    is_guaranteed_exact, min_mono_boxes_exact, moser_tardos_color, obstruction_set, MinOutcome,
};
use gridramsey::{verify, Certificate, Coloring, Grid, Method, SearchBudget, Verdict};

#[derive(Parser)]
#[command(name = "gridramsey", version, about = "Monochromatic boxes in colored grids: bounds, searches, certificates")]
struct Cli {
    /// Seed for randomized steps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for searches.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Time limit per search, in seconds [default: 45 per table cell, 600 otherwise].
    #[arg(long, global = true, env = "GRIDRAMSEY_BUDGET_SECONDS")]
    budget_seconds: Option<u64>,
    /// Node limit per search.
    #[arg(long, global = true, default_value_t = 20_000_000_000)]
    max_nodes: u64,
    /// Directory for witness colorings. Nothing is written without it.
    #[arg(long, global = true)]
    witness_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckMethod {
    Auto,
    Exhaustive,
    Pigeonhole,
    Delta,
    Gamma,
    Epsilon,
    Hereditary,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    Largest,
    Smallest,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether every c-coloring of the grid has a monochromatic box.
    Check {
        #[arg(long)]
        c: u64,
        #[arg(long, value_parser = parse_grid)]
        grid: Grid,
        #[arg(long, value_enum, default_value = "auto")]
        method: CheckMethod,
    },
    /// Least number of monochromatic boxes over all c-colorings.
    Mint {
        #[arg(long)]
        c: u64,
        #[arg(long, value_parser = parse_grid)]
        grid: Grid,
    },
    /// The mu sequence with both sides of its certificate.
    Mu {
        #[arg(long)]
        c: u64,
        #[arg(long)]
        d: usize,
    },
    /// Coloring of the mu grid with exactly one monochromatic box.
    MinimalColoring {
        #[arg(long)]
        c: u64,
        #[arg(long)]
        d: usize,
        /// Write the coloring here instead of embedding it.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// The eps sum; below one certifies a guarantee.
    Eps {
        #[arg(long)]
        c: u64,
        #[arg(long, value_parser = parse_grid)]
        grid: Grid,
    },
    /// Delta recurrence and the guaranteed count.
    Delta {
        #[arg(long)]
        c: u64,
        #[arg(long, value_parser = parse_grid)]
        grid: Grid,
    },
    /// Gamma recurrence.
    Gamma {
        #[arg(long)]
        c: u64,
        #[arg(long, value_parser = parse_grid)]
        grid: Grid,
    },
    /// Volume below which every grid is c-colorable.
    Lll {
        #[arg(long)]
        c: u64,
        #[arg(long)]
        d: usize,
    },
    /// Hereditary volume criterion.
    Hereditary {
        #[arg(long)]
        c: u64,
        #[arg(long, value_parser = parse_grid)]
        grid: Grid,
    },
    /// Pinch points of a monotone grid.
    Pinch {
        #[arg(long)]
        c: u64,
        #[arg(long, value_parser = parse_grid)]
        grid: Grid,
        #[arg(long, value_enum, default_value = "largest")]
        rule: Rule,
    },
    /// Column-type matrix M_r.
    QformBuild {
        #[arg(long)]
        r: usize,
        /// Write the matrix as text here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Least rectangle count of a 2-colored r x s grid.
    QformMin {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
    },
    /// Exact eigenvalues of M_r.
    Spectrum {
        #[arg(long)]
        r: usize,
    },
    /// Bounds on the least a3 making [a1, a2, a3] 2-guaranteed.
    Table {
        #[arg(long, default_value_t = 2)]
        c: u64,
        /// Range of a1 (and of a2 unless given), inclusive: `3..12`.
        #[arg(long, default_value = "3..12")]
        range: String,
        #[arg(long)]
        a2_range: Option<String>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        markdown: Option<PathBuf>,
        /// `a1,a2,a3` triples for plotting.
        #[arg(long)]
        surface: Option<PathBuf>,
    },
    /// Minimal guaranteed grids within caps.
    Obstructions {
        #[arg(long)]
        c: u64,
        #[arg(long)]
        d: usize,
        #[arg(long, value_parser = parse_grid)]
        caps: Grid,
    },
    /// Exponent e with |O(c, d)| = O(c^e).
    Exponent {
        #[arg(long)]
        d: usize,
    },
    /// Random coloring repaired by resampling monochromatic boxes.
    MtColor {
        #[arg(long)]
        c: u64,
        #[arg(long, value_parser = parse_grid)]
        grid: Grid,
        #[arg(long, default_value_t = 1_000_000)]
        max_resamples: u64,
    },
    /// Re-check a certificate file (a result document or a bare certificate).
    Verify {
        #[arg(long)]
        cert: PathBuf,
    },
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    s.parse().map_err(|e: gridramsey::Error| e.to_string())
}

fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<u64>> {
    let (lo, hi) = s
        .split_once("..")
        .with_context(|| format!("range {s:?} is not of the form A..B"))?;
    let lo: u64 = lo.trim().parse().with_context(|| format!("range start in {s:?}"))?;
    let hi: u64 = hi.trim().trim_start_matches('=').parse().with_context(|| format!("range end in {s:?}"))?;
    if lo > hi {
        bail!("empty range {s:?}");
    }
    Ok(lo..=hi)
}

fn colors(c: u64) -> Result<usize> {
    if c == 0 {
        bail!("the color count must be positive");
    }
    Ok(usize::try_from(c)?)
}

struct Ctx {
    budget: SearchBudget,
    seed: u64,
    witness_dir: Option<PathBuf>,
}

impl Ctx {
    fn write_coloring(&self, stem: &str, coloring: &Coloring) -> Result<Option<String>> {
        let Some(dir) = &self.witness_dir else {
            return Ok(None);
        };
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let name = format!("{stem}-c{}-{}.txt", coloring.colors(), coloring.grid());
        fs::write(dir.join(&name), coloring.to_text())
            .with_context(|| format!("writing {name}"))?;
        Ok(Some(name))
    }

    /// Writes the witness of `cert` and of every sub-certificate.
    fn attach_witnesses(&self, stem: &str, cert: &mut Certificate) -> Result<()> {
        if let Some(w) = &cert.witness {
            cert.witness_file = self.write_coloring(stem, w)?;
        }
        for sub in &mut cert.sub_certificates {
            self.attach_witnesses(stem, sub)?;
        }
        Ok(())
    }

    fn cert_value(&self, stem: &str, mut cert: Certificate) -> Result<Value> {
        self.attach_witnesses(stem, &mut cert)?;
        Ok(serde_json::to_value(&cert)?)
    }
}

fn strings(v: &[impl ToString]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn run(cli: Cli) -> Result<(String, Value)> {
    let default_seconds = match cli.command {
        Command::Table { .. } => 45,
        _ => 600,
    };
    let seconds = cli.budget_seconds.unwrap_or(default_seconds);
    let ctx = Ctx {
        budget: SearchBudget::new(cli.max_nodes, seconds).with_shards(cli.threads.max(1)),
        seed: cli.seed,
        witness_dir: cli.witness_dir,
    };
    let (name, result) = match cli.command {
        Command::Check { c, grid, method } => ("check", check(&ctx, c, &grid, method)?),
        Command::Mint { c, grid } => ("mint", mint(&ctx, c, &grid)?),
        Command::Mu { c, d } => ("mu", mu(&ctx, c, d)?),
        Command::MinimalColoring { c, d, output } => {
            ("minimal-coloring", minimal(&ctx, c, d, output.as_deref())?)
        }
        Command::Eps { c, grid } => {
            let seq = epsilon_sequence(c, &grid)?;
            let value = epsilon(c, &grid)?;
            let cert = epsilon_certificate(c, &grid)?;
            (
                "eps",
                json!({
                    "c": c,
                    "grid": grid,
                    "epsilon": value.to_string(),
                    "terms": seq.terms_as_strings(),
                    "guaranteed": seq.certifies_guarantee(),
                    "certificate": cert,
                }),
            )
        }
        Command::Delta { c, grid } => {
            let seq = delta_sequence(c, &grid)?;
            let count = guaranteed_count_lower_bound(c, &grid, false)?;
            let ceiling = guaranteed_count_lower_bound(c, &grid, true)?;
            (
                "delta",
                json!({
                    "c": c,
                    "grid": grid,
                    "terms": seq.terms_as_strings(),
                    "guaranteed": seq.certifies_guarantee(),
                    "count_lower_bound": count.map(|x| x.to_string()),
                    "ceiling_count_lower_bound": ceiling.map(|x| x.to_string()),
                    "certificate": delta_certificate(c, &grid)?,
                }),
            )
        }
        Command::Gamma { c, grid } => {
            let seq = gamma_sequence(c, &grid)?;
            (
                "gamma",
                json!({
                    "c": c,
                    "grid": grid,
                    "terms": seq.terms_as_strings(),
                    "guaranteed": seq.certifies_guarantee(),
                    "certificate": gamma_certificate(c, &grid)?,
                }),
            )
        }
        Command::Lll { c, d } => (
            "lll",
            json!({
                "c": c,
                "d": d,
                "threshold": lll_volume_threshold(c, d)?.to_string(),
                "sandwich": volume_sandwich(c, d)?,
            }),
        ),
        Command::Hereditary { c, grid } => {
            let d = grid.dim();
            let constants: Vec<String> = (1..=d).map(|j| hereditary_constant(d, j).to_string()).collect();
            let virtual_colors: Vec<String> = (1..d)
                .map(|j| virtual_color_count(c, &grid.canonicalize(), j).map(|v| v.to_string()))
                .collect::<gridramsey::Result<_>>()?;
            (
                "hereditary",
                json!({
                    "c": c,
                    "grid": grid,
                    "constants": constants,
                    "virtual_colors": virtual_colors,
                    "holds": hereditary_check(c, &grid),
                    "certificate": hereditary_certificate(c, &grid),
                }),
            )
        }
        Command::Pinch { c, grid, rule } => {
            let rule = match rule {
                Rule::Largest => PinchRule::Largest,
                Rule::Smallest => PinchRule::Smallest,
            };
            ("pinch", serde_json::to_value(pinch_points(c, &grid, rule)?)?)
        }
        Command::QformBuild { r, output } => ("qform-build", qform_build(r, output.as_deref())?),
        Command::QformMin { r, s } => {
            let out = min_rectangles(r, s, &ctx.budget)?;
            let coloring = coloring_from_vector(r, out.vector()).ok();
            let file = match &coloring {
                Some(col) => ctx.write_coloring("qform-min", col)?,
                None => None,
            };
            let mut value = serde_json::to_value(&out)?;
            value["r"] = json!(r);
            value["s"] = json!(s);
            value["witness_file"] = json!(file);
            ("qform-min", value)
        }
        Command::Spectrum { r } => ("spectrum", serde_json::to_value(spectrum(r)?)?),
        Command::Table {
            c,
            range,
            a2_range,
            csv,
            markdown,
            surface,
        } => {
            if c != 2 {
                bail!("the a3 table is defined for two colors");
            }
            let a1 = parse_range(&range)?;
            let a2 = parse_range(a2_range.as_deref().unwrap_or(&range))?;
            let table = a3_table(a1, a2, &ctx.budget)?;
            for (path, text) in [
                (csv, table.to_csv()),
                (markdown, table.to_markdown()),
                (surface, table.surface_csv()),
            ] {
                if let Some(path) = path {
                    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
                }
            }
            let mut value = serde_json::to_value(&table)?;
            value["csv"] = json!(table.to_csv());
            value["markdown"] = json!(table.to_markdown());
            ("table", value)
        }
        Command::Obstructions { c, d, caps } => {
            let set = obstruction_set(colors(c)?, d, &caps, &ctx.budget)?;
            let mut value = serde_json::to_value(&set)?;
            let mut entries = Vec::new();
            for e in set.entries {
                let decrements: Vec<Value> = e
                    .decrements
                    .into_iter()
                    .map(|cert| ctx.cert_value("obstruction", cert))
                    .collect::<Result<_>>()?;
                entries.push(json!({
                    "grid": e.grid,
                    "guarantee": ctx.cert_value("obstruction", e.guarantee)?,
                    "decrements": decrements,
                }));
            }
            value["entries"] = Value::Array(entries);
            ("obstructions", value)
        }
        Command::Exponent { d } => ("exponent", serde_json::to_value(obstruction_count_exponent(d)?)?),
        Command::MtColor { c, grid, max_resamples } => {
            let out = moser_tardos_color(colors(c)?, &grid, ctx.seed, max_resamples)?;
            let cert = out
                .success
                .then(|| Certificate::colorable(Method::Resample, out.coloring.clone()).with_param("seed", ctx.seed));
            let cert = cert.map(|c| ctx.cert_value("mt-color", c)).transpose()?;
            (
                "mt-color",
                json!({
                    "c": c,
                    "grid": grid,
                    "seed": ctx.seed,
                    "success": out.success,
                    "resamples": out.resamples,
                    "certificate": cert,
                }),
            )
        }
        Command::Verify { cert } => ("verify", verify_file(&ctx, &cert)?),
    };
    Ok((name.to_string(), result))
}

fn check(ctx: &Ctx, c: u64, grid: &Grid, method: CheckMethod) -> Result<Value> {
    let unknown = |m: Method| Certificate::unknown(m, grid.clone(), c);
    let cert = match method {
        CheckMethod::Exhaustive => is_guaranteed_exact(colors(c)?, grid, &ctx.budget),
        CheckMethod::Pigeonhole => {
            if grid.dim() != 1 {
                bail!("pigeonhole applies to one-dimensional grids");
            }
            pigeonhole_certificate(c, grid.dims()[0].clone())
                .unwrap_or_else(|| is_guaranteed_exact(colors(c).unwrap_or(1), grid, &ctx.budget))
        }
        CheckMethod::Delta => match delta_certificate(c, grid)? {
            Some(cert) => cert,
            None => ceiling_certificate(c, grid)?.unwrap_or_else(|| unknown(Method::Delta)),
        },
        CheckMethod::Gamma => gamma_certificate(c, grid)?.unwrap_or_else(|| unknown(Method::Gamma)),
        CheckMethod::Epsilon => epsilon_certificate(c, grid)?.unwrap_or_else(|| unknown(Method::Epsilon)),
        CheckMethod::Hereditary => {
            hereditary_certificate(c, grid).unwrap_or_else(|| unknown(Method::Hereditary))
        }
        CheckMethod::Auto => {
            let analytic = if grid.dims().iter().all(|a| *a >= 2u32.into()) && grid.dim() > 1 {
                epsilon_certificate(c, grid)?
                    .or(gamma_certificate(c, grid)?)
                    .or(delta_certificate(c, grid)?)
                    .or(ceiling_certificate(c, grid)?)
                    .or_else(|| hereditary_certificate(c, grid))
            } else {
                None
            };
            match analytic {
                Some(cert) => cert,
                None => is_guaranteed_exact(colors(c)?, grid, &ctx.budget),
            }
        }
    };
    ctx.cert_value("check", cert)
}

/// Delta certificate from the ceiling-improved count, carrying that count as `t`.
fn ceiling_certificate(c: u64, grid: &Grid) -> Result<Option<Certificate>> {
    Ok(guaranteed_count_lower_bound(c, grid, true)?.map(|t| {
        Certificate::guaranteed(Method::Delta, grid.clone(), c)
            .with_param("t", t.to_integer().to_string())
            .with_param("ceiling", true)
    }))
}

fn mint(ctx: &Ctx, c: u64, grid: &Grid) -> Result<Value> {
    Ok(match min_mono_boxes_exact(colors(c)?, grid, &ctx.budget) {
        MinOutcome::Exact { t, witness } => {
            let file = match &witness {
                Some(w) => ctx.write_coloring("mint", w)?,
                None => None,
            };
            json!({"c": c, "grid": grid, "status": "exact", "t": t.to_string(), "witness_file": file})
        }
        MinOutcome::Unknown { upper } => json!({
            "c": c,
            "grid": grid,
            "status": "unknown",
            "upper": upper.map(|u| u.to_string()),
        }),
    })
}

fn mu(ctx: &Ctx, c: u64, d: usize) -> Result<Value> {
    let seq = mu_sequence(c, d)?;
    let lower: Vec<bool> = (1..=d).map(|j| mu_lower_bound_holds(c, j)).collect::<gridramsey::Result<_>>()?;
    let guarantee = ctx.cert_value("mu", mu_guarantee_certificate(c, d)?)?;
    let colorable = match mu_colorable_certificate(colors(c)?, d) {
        Ok(cert) => Some(ctx.cert_value("mu", cert)?),
        Err(gridramsey::Error::TooLarge(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let minimal_file = match minimal_coloring(colors(c)?, d) {
        Ok(m) => ctx.write_coloring("minimal", &m.coloring)?,
        Err(gridramsey::Error::TooLarge(_)) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(json!({
        "c": c,
        "d": d,
        "sequence": strings(&seq),
        "lower_bound_holds": lower,
        "guarantee": guarantee,
        "colorable": colorable,
        "minimal_coloring_file": minimal_file,
    }))
}

fn minimal(ctx: &Ctx, c: u64, d: usize, output: Option<&Path>) -> Result<Value> {
    let m = minimal_coloring(colors(c)?, d)?;
    let count = m.coloring.count_monochromatic_boxes();
    let mut value = json!({
        "c": c,
        "d": d,
        "grid": m.coloring.grid(),
        "monochromatic_boxes": count.to_string(),
        "mono_box": m.mono_box.pairs().iter().map(|&(x, y)| [x + 1, y + 1]).collect::<Vec<_>>(),
        "mono_color": m.mono_color + 1,
    });
    if let Some(path) = output {
        fs::write(path, m.coloring.to_text()).with_context(|| format!("writing {}", path.display()))?;
        value["file"] = json!(path.display().to_string());
    } else if let Some(name) = ctx.write_coloring("minimal", &m.coloring)? {
        value["file"] = json!(name);
    } else {
        value["coloring"] = json!(m.coloring.to_text());
    }
    Ok(value)
}

fn qform_build(r: usize, output: Option<&Path>) -> Result<Value> {
    let inst = build_matrix(r)?;
    let trace: u64 = inst.diag().iter().sum();
    let mut value = json!({"r": r, "size": inst.size(), "trace": trace, "diagonal": inst.diag()});
    match output {
        Some(path) => {
            fs::write(path, inst.to_text()?).with_context(|| format!("writing {}", path.display()))?;
            value["file"] = json!(path.display().to_string());
        }
        None if r <= 6 => {
            let n = inst.size();
            let rows: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| inst.entry(i, j)).collect()).collect();
            value["matrix"] = json!(rows);
        }
        None => bail!("M_{r} has {} entries; pass --output", inst.size() * inst.size()),
    }
    Ok(value)
}

/// Loads the witness of every certificate that names a file, relative to `base`.
fn load_witnesses(cert: &mut Certificate, base: &Path) -> Result<()> {
    if let Some(name) = &cert.witness_file {
        let path = base.join(name);
        let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        cert.witness = Some(Coloring::parse(&text)?);
    }
    for sub in &mut cert.sub_certificates {
        load_witnesses(sub, base)?;
    }
    Ok(())
}

/// Collects every certificate in `doc`, outermost first, with its JSON path.
fn find_certificates(doc: &Value, path: String, out: &mut Vec<(String, Value)>) {
    match doc {
        Value::Object(map) if map.contains_key("verdict") && map.contains_key("method") => {
            out.push((path, doc.clone()));
        }
        Value::Object(map) => {
            for (k, v) in map {
                find_certificates(v, format!("{path}/{k}"), out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                find_certificates(v, format!("{path}/{i}"), out);
            }
        }
        _ => {}
    }
}

fn verify_file(ctx: &Ctx, path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc: Value = serde_json::from_str(&text).context("certificate file is not JSON")?;
    let mut found = Vec::new();
    find_certificates(&doc, String::new(), &mut found);
    if found.is_empty() {
        bail!("no certificate in {}", path.display());
    }
    let base = match &ctx.witness_dir {
        Some(dir) => dir.clone(),
        None => path.parent().map(Path::to_path_buf).unwrap_or_default(),
    };
    let mut reports = Vec::new();
    let mut all_valid = true;
    for (at, value) in found {
        let mut cert: Certificate =
            serde_json::from_value(value).with_context(|| format!("malformed certificate at {at:?}"))?;
        // An unknown verdict claims nothing, so there is nothing to check.
        let outcome = if cert.verdict == Verdict::Unknown {
            None
        } else {
            Some(load_witnesses(&mut cert, &base).and_then(|()| Ok(verify(&cert, &ctx.budget)?)))
        };
        let valid = outcome.as_ref().map(Result::is_ok);
        all_valid &= valid != Some(false);
        reports.push(json!({
            "path": if at.is_empty() { "/".to_string() } else { at },
            "grid": cert.grid,
            "verdict": cert.verdict,
            "method": cert.method,
            "valid": valid,
            "error": outcome.and_then(Result::err).map(|e| format!("{e:#}")),
        }));
    }
    Ok(json!({"valid": all_valid, "certificates": reports}))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((command, result)) => {
            let doc = json!({"schema": 1, "command": command, "result": result});
            let text = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
            // A closed pipe downstream is not a failure of the command.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
