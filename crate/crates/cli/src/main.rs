//! `freeprod`: dimensions, bases and shuffle-operad checks from the shell.
//!
//! Exit status: 0 on success, 1 when a check fails (a confluence FAIL), 2
//! for usage and input errors.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use freeprod::dims::{free_product_dims, parse_operad_config, resolve_operad, symbolic_dims, OperadConfig, OperadDims};
use freeprod::shuffle::{
    bundled, check_confluence, count_normal_monomials, enumerate_shuffle_trees, normal_form, parse_rules,
    RewriteRule, ShuffleElement, Strategy, Symbol,
};
use freeprod::spnet::{enumerate_networks, macmahon};
use freeprod::trees::{count_avoiding, enumerate_basis, RootFilter, VertexPattern};

use output::{big, Table};

/// Largest arity for commands that list or enumerate trees.
const ENUMERATION_MAX: usize = 7;
/// Largest size for `sp --list`.
const SP_LIST_MAX: usize = 12;

#[derive(Parser)]
#[command(name = "freeprod", version, about = "Free products of binary operads")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Worker threads for parallel steps (default: all cores).
    #[arg(long, global = true, env = "FREEPROD_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Args)]
struct OperadPair {
    /// Left factor (the `•` vertices): a built-in id or a name from --config.
    #[arg(long)]
    left: Option<String>,
    /// Right factor (the `∘` vertices).
    #[arg(long)]
    right: Option<String>,
    /// File of operad definitions, `name = [d2, d3, ...]` per line.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl OperadPair {
    fn resolve(&self) -> Result<(OperadDims, OperadDims)> {
        let config: Option<OperadConfig> = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                Some(parse_operad_config(&text)?)
            }
            None => None,
        };
        let get = |flag: &str, v: &Option<String>| -> Result<OperadDims> {
            let spec = v.as_deref().ok_or_else(|| anyhow!("--{flag} is required"))?;
            Ok(resolve_operad(spec, config.as_ref())?)
        };
        Ok((get("left", &self.left)?, get("right", &self.right)?))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Dimensions of (left ∗ right)(n) split by root color.
    Dims {
        #[command(flatten)]
        operads: OperadPair,
        /// Largest arity.
        #[arg(short = 'n', long = "n-max")]
        n: usize,
        /// Print the recursion as polynomials in x2, x3, ... and y2, y3, ...
        #[arg(long)]
        symbolic: bool,
    },
    /// Check that the overlaps of a rule system reduce to zero.
    Confluence {
        /// Rule file, or the name of a bundled system (`lie`, `lie-adm`).
        #[arg(long)]
        rules: String,
        /// Largest overlap arity.
        #[arg(long, default_value_t = 5)]
        max_arity: usize,
        /// Random elements to reduce with two strategies as an extra check.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Number of shuffle monomials of arity n divisible by no leading monomial.
    CountNormal {
        #[arg(long)]
        rules: String,
        #[arg(short = 'n', long)]
        n: usize,
        /// Generators as `x,y` (binary); defaults to the symbols of the rules.
        #[arg(long, value_delimiter = ',')]
        alphabet: Vec<String>,
    },
    /// List the basis trees of (left ∗ right)(n).
    Basis {
        #[command(flatten)]
        operads: OperadPair,
        #[arg(short = 'n', long)]
        n: usize,
        #[arg(long, default_value = "any")]
        root: String,
    },
    /// Count basis trees with no vertex matching a pattern.
    Quotient {
        #[command(flatten)]
        operads: OperadPair,
        /// Vertex pattern, e.g. `bullet-composite-child`; repeatable.
        #[arg(long, required = true)]
        pattern: Vec<String>,
        #[arg(short = 'n', long)]
        n: usize,
    },
    /// Series-parallel networks with n edges.
    Sp {
        #[arg(short = 'n', long)]
        n: usize,
        /// Print the number of networks (default).
        #[arg(long, conflicts_with_all = ["list", "sequence"])]
        count: bool,
        /// List the networks in canonical form.
        #[arg(long, conflicts_with = "sequence")]
        list: bool,
        /// Print the counts for sizes 1..=n.
        #[arg(long)]
        sequence: bool,
    },
    /// Reduce an element to normal form.
    NormalForm {
        #[arg(long)]
        rules: String,
        /// The element, e.g. `x(x(x(1 2) 3) 4)`.
        element: String,
    },
}

/// A failure to report with exit status 1 after printing normal output.
struct CheckFailed;

fn load_rules(spec: &str) -> Result<Vec<RewriteRule>> {
    let name = spec.strip_prefix("builtin:").unwrap_or(spec);
    let path = PathBuf::from(spec);
    let text = if !spec.starts_with("builtin:") && path.is_file() {
        std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?
    } else {
        let file = path.file_name().and_then(|f| f.to_str()).unwrap_or(name);
        bundled::get(file)
            .or_else(|| bundled::get(name))
            .ok_or_else(|| anyhow!("rule file `{spec}` not found (bundled systems: lie, lie-adm)"))?
            .to_string()
    };
    parse_rules(&text).with_context(|| format!("parsing rules from `{spec}`"))
}

fn rule_alphabet(rules: &[RewriteRule]) -> Vec<(Symbol, usize)> {
    let mut all = std::collections::BTreeMap::new();
    for r in rules {
        all.extend(r.lhs().symbols());
        for m in r.rhs().monomials() {
            all.extend(m.symbols());
        }
    }
    let mut v: Vec<(Symbol, usize)> = all.into_iter().collect();
    v.sort_by(|a, b| a.0.name().cmp(b.0.name()));
    v
}

fn emit(format: Format, value: Value, table: Table) {
    use std::io::Write;
    let text = match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&value).expect("serializable")),
        Format::Table => table.to_string(),
    };
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn run(cli: Cli) -> Result<Option<CheckFailed>> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().context("configuring threads")?;
    }
    let format = cli.format;
    match cli.command {
        Command::Dims { operads, n, symbolic: true } => {
            if operads.left.is_some() || operads.right.is_some() {
                bail!("--symbolic does not take --left/--right");
            }
            let polys = symbolic_dims(n)?;
            let mut rows = Vec::new();
            let mut table = Table::lines();
            for (k, (b, c)) in &polys {
                let total = b.add(c);
                table.line(format!("d{k}_bullet = {b}"));
                table.line(format!("d{k}_circ = {c}"));
                table.line(format!("d{k} = {total}"));
                rows.push(json!({"n": k, "bullet": b.to_string(), "circ": c.to_string(), "total": total.to_string()}));
            }
            emit(format, json!({"command": "dims-symbolic", "n_max": n, "rows": rows}), table);
        }
        Command::Dims { operads, n, symbolic: false } => {
            let (x, y) = operads.resolve()?;
            let t = free_product_dims(&x, &y, n)?;
            let mut table = Table::new(["n", "bullet", "circ", "total"]);
            let mut rows = Vec::new();
            for k in 1..=n {
                let cell = |v: Option<&BigUint>| v.map_or_else(|| "-".to_string(), ToString::to_string);
                let opt = |v: Option<&BigUint>| v.map_or(Value::Null, big);
                table.row([k.to_string(), cell(t.bullet(k)), cell(t.circ(k)), cell(t.total(k))]);
                rows.push(json!({"n": k, "bullet": opt(t.bullet(k)), "circ": opt(t.circ(k)), "total": opt(t.total(k))}));
            }
            emit(format, json!({"command": "dims", "left": x.name(), "right": y.name(), "rows": rows}), table);
        }
        Command::Confluence { rules, max_arity, samples, seed } => {
            let system = load_rules(&rules)?;
            let report = check_confluence(&system, max_arity)?;
            let mut mismatches = 0usize;
            if samples > 0 {
                let alphabet = rule_alphabet(&system);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let top = max_arity.clamp(2, 5);
                let pools: Vec<_> = (2..=top).map(|k| enumerate_shuffle_trees(&alphabet, k)).collect();
                for _ in 0..samples {
                    let pool = &pools[rng.gen_range(0..pools.len())];
                    let e: ShuffleElement = (0..3)
                        .map(|_| {
                            let m = pool[rng.gen_range(0..pool.len())].clone();
                            (m, num_rational::BigRational::from_integer(rng.gen_range(-3i64..=3).into()))
                        })
                        .collect();
                    let a = normal_form(&e, &system, Strategy::LeftmostOutermost);
                    let b = normal_form(&e, &system, Strategy::Random(&mut rng));
                    if a != b {
                        mismatches += 1;
                    }
                }
            }
            let passed = report.passed() && mismatches == 0;
            let status = if passed { "PASS" } else { "FAIL" };
            let classes = report.overlap_monomials().len();
            let mut table = Table::lines();
            table.line(format!(
                "{status}: {} overlap(s) in {classes} class(es) up to arity {max_arity}",
                report.results.len()
            ));
            let mut overlaps = Vec::new();
            for r in &report.results {
                let o = &r.overlap;
                let ok = r.residue.is_zero();
                table.line(format!(
                    "  {}  arity {}  rules {}/{}  {}",
                    o.monomial,
                    o.monomial.arity(),
                    o.rules.0 + 1,
                    o.rules.1 + 1,
                    if ok { "reduces to 0".to_string() } else { format!("irreducible: {}", r.residue) }
                ));
                overlaps.push(json!({
                    "monomial": o.monomial.to_string(),
                    "arity": o.monomial.arity(),
                    "rules": [o.rules.0 + 1, o.rules.1 + 1],
                    "positions": [o.embeddings.0.position, o.embeddings.1.position],
                    "s_element": o.s_element.to_string(),
                    "normal_form": r.residue.to_string(),
                }));
            }
            if samples > 0 {
                table.line(format!("strategy check: {samples} sample(s), {mismatches} mismatch(es)"));
            }
            let value = json!({
                "command": "confluence",
                "status": status,
                "max_arity": max_arity,
                "overlap_classes": classes,
                "overlaps": overlaps,
                "samples": samples,
                "strategy_mismatches": mismatches,
            });
            emit(format, value, table);
            if !passed {
                return Ok(Some(CheckFailed));
            }
        }
        Command::CountNormal { rules, n, alphabet } => {
            if n == 0 || n > ENUMERATION_MAX {
                bail!("count-normal supports 1 <= n <= {ENUMERATION_MAX}");
            }
            let system = load_rules(&rules)?;
            let alphabet: Vec<(Symbol, usize)> = if alphabet.is_empty() {
                rule_alphabet(&system)
            } else {
                alphabet.iter().map(|s| (Symbol::new(s.trim()), 2)).collect()
            };
            let count = count_normal_monomials(&alphabet, &system, n);
            let names: Vec<&str> = alphabet.iter().map(|(s, _)| s.name()).collect();
            let mut table = Table::new(["n", "normal"]);
            table.row([n.to_string(), count.to_string()]);
            emit(format, json!({"command": "count-normal", "n": n, "alphabet": names, "count": big(&count)}), table);
        }
        Command::Basis { operads, n, root } => {
            if n == 0 || n > ENUMERATION_MAX {
                bail!("basis supports 1 <= n <= {ENUMERATION_MAX}");
            }
            let (x, y) = operads.resolve()?;
            let filter: RootFilter = root.parse()?;
            let trees = enumerate_basis(&x, &y, n, filter)?;
            let mut table = Table::lines();
            for t in &trees {
                table.line(t.to_string());
            }
            let list: Vec<String> = trees.iter().map(ToString::to_string).collect();
            let value = json!({
                "command": "basis", "left": x.name(), "right": y.name(), "n": n, "root": root,
                "count": trees.len(), "trees": list,
            });
            emit(format, value, table);
        }
        Command::Quotient { operads, pattern, n } => {
            let (x, y) = operads.resolve()?;
            let patterns = pattern.iter().map(|p| p.parse::<VertexPattern>()).collect::<Result<Vec<_>, _>>()?;
            let total = count_avoiding(&x, &y, n, &[])?;
            let avoiding = count_avoiding(&x, &y, n, &patterns)?;
            let containing = &total - &avoiding;
            let mut table = Table::new(["n", "total", "avoiding", "containing"]);
            table.row([n.to_string(), total.to_string(), avoiding.to_string(), containing.to_string()]);
            let names: Vec<String> = patterns.iter().map(ToString::to_string).collect();
            let value = json!({
                "command": "quotient", "left": x.name(), "right": y.name(), "patterns": names, "n": n,
                "total": big(&total), "avoiding": big(&avoiding), "containing": big(&containing),
            });
            emit(format, value, table);
        }
        Command::Sp { n, count: _, list, sequence } => {
            if n == 0 {
                bail!("n must be positive");
            }
            if list {
                if n > SP_LIST_MAX {
                    bail!("sp --list supports n <= {SP_LIST_MAX}");
                }
                let nets = enumerate_networks(n);
                let mut table = Table::lines();
                let names: Vec<String> = nets.iter().map(ToString::to_string).collect();
                for s in &names {
                    table.line(s.clone());
                }
                emit(format, json!({"command": "sp", "mode": "list", "n": n, "count": nets.len(), "networks": names}), table);
            } else if sequence {
                let mut table = Table::new(["n", "networks"]);
                let mut values = Vec::new();
                for k in 1..=n {
                    let c = macmahon(k);
                    table.row([k.to_string(), c.to_string()]);
                    values.push(big(&c));
                }
                emit(format, json!({"command": "sp", "mode": "sequence", "n": n, "values": values}), table);
            } else {
                let c = macmahon(n);
                let mut table = Table::new(["n", "networks"]);
                table.row([n.to_string(), c.to_string()]);
                emit(format, json!({"command": "sp", "mode": "count", "n": n, "count": big(&c)}), table);
            }
        }
        Command::NormalForm { rules, element } => {
            let system = load_rules(&rules)?;
            let e: ShuffleElement = element.parse().context("parsing the element")?;
            let nf = normal_form(&e, &system, Strategy::LeftmostOutermost);
            let mut table = Table::lines();
            table.line(nf.to_string());
            emit(format, json!({"command": "normal-form", "input": e.to_string(), "normal_form": nf.to_string()}), table);
        }
    }
    Ok(None)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(CheckFailed)) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
