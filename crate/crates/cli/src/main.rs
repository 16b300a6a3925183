use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use abd_core::abd::{average_branching_distance, connected_part, frame_angles, per_frame_distances, AbdConfig};
use abd_core::analysis::{
    classical_mds, cut_clusters, distance_matrix, read_matrix_csv, render, single_linkage, Artifact, ExportKind,
};
use abd_core::branching::{branching_distance_with, DistanceMode, Engine};
use abd_core::filtration::{collapse_equal_adjacent, direction_filter, DEFAULT_COLLAPSE_TOL};
use abd_core::graph_io::{load_graph, write_graph, EmbeddedGraph, GraphFormat};
use abd_core::merge_tree::{compute_merge_tree, Centering, MergeTree};
use abd_core::synth;
use abd_core::verify::{self, VerifyOptions};

#[derive(Parser)]
#[command(name = "abd-kit", version, about = "Compare plane graphs through merge trees of their height functions")]
struct Cli {
    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Number of evenly spaced directions.
    #[arg(long, global = true, default_value_t = 10)]
    frames: usize,

    /// How per-frame distances are combined.
    #[arg(long, global = true, value_enum, default_value_t = Avg::Median)]
    avg: Avg,

    #[arg(long, global = true, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,

    /// Bisection width; implies `--mode tolerance`.
    #[arg(long, global = true)]
    tol: Option<f64>,

    #[arg(long, global = true, value_enum, default_value_t = EngineArg::Optimized)]
    engine: EngineArg,

    /// Worker threads for matrix building.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[arg(long, global = true, default_value_t = synth::DEFAULT_SEED)]
    seed: u64,

    /// Output file (or directory for `gen`); stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Input graph format (json, edgelist) or output format (csv, newick, svg).
    #[arg(long, global = true)]
    format: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Avg {
    Median,
    Mean,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Tolerance,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Optimized,
    Baseline,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Shapes,
    Convex,
    Smooth,
}

#[derive(Subcommand)]
enum Command {
    /// Merge tree of a graph's height function along one direction.
    Tree {
        graph: PathBuf,
        /// Direction in radians.
        #[arg(long, default_value_t = FRAC_PI_2, allow_negative_numbers = true)]
        angle: f64,
    },
    /// Branching distance between two merge-tree JSON files.
    Dist { a: PathBuf, b: PathBuf },
    /// Average branching distance between two graphs.
    Abd {
        g: PathBuf,
        h: PathBuf,
        /// Also print every frame's distance as CSV.
        #[arg(long)]
        per_frame: bool,
    },
    /// Pairwise average branching distances as a CSV matrix.
    Matrix {
        #[arg(required = true, num_args = 2..)]
        graphs: Vec<PathBuf>,
    },
    /// Single-linkage dendrogram of a CSV matrix.
    Cluster {
        matrix: PathBuf,
        /// Print a flat assignment into this many clusters instead.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Classical MDS embedding of a CSV matrix.
    Mds {
        matrix: PathBuf,
        #[arg(long, default_value_t = 2)]
        dims: usize,
    },
    /// Replay the counterexamples and randomized property checks.
    Verify {
        #[arg(long, default_value_t = verify::DEFAULT_TRIALS)]
        trials: usize,
        /// Directory holding replacement fixture files.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
    /// Write synthetic graphs into the `--out` directory.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        /// Instances per class for `shapes`, graphs otherwise.
        #[arg(long, default_value_t = 6)]
        count: usize,
        #[arg(long, default_value_t = 0.05)]
        noise: f64,
    },
}

impl Global {
    fn config(&self) -> Result<AbdConfig> {
        if self.frames == 0 {
            bail!("--frames must be at least 1");
        }
        Ok(AbdConfig {
            frames: self.frames,
            avg: match self.avg {
                Avg::Median => Centering::Median,
                Avg::Mean => Centering::Mean,
            },
            mode: self.mode()?,
            engine: match self.engine {
                EngineArg::Optimized => Engine::Optimized,
                EngineArg::Baseline => Engine::Baseline,
            },
            ..AbdConfig::default()
        })
    }

    fn mode(&self) -> Result<DistanceMode> {
        match (self.mode, self.tol) {
            (_, Some(t)) if t.is_nan() || t <= 0.0 => bail!("--tol must be positive"),
            (_, Some(t)) => Ok(DistanceMode::Tolerance(t)),
            (Mode::Tolerance, None) => bail!("--mode tolerance needs --tol"),
            (Mode::Exact, None) => Ok(DistanceMode::Exact),
        }
    }

    fn graph_format(&self, path: &Path) -> Result<GraphFormat> {
        if let Some(f) = &self.format {
            return Ok(f.parse()?);
        }
        Ok(match path.extension().and_then(|e| e.to_str()) {
            Some("json") | None => GraphFormat::Json,
            _ => GraphFormat::EdgeList,
        })
    }

    fn load(&self, path: &Path) -> Result<EmbeddedGraph> {
        load_graph(path, self.graph_format(path)?).with_context(|| format!("loading {}", path.display()))
    }

    /// Output format from `--format`, else the `--out` extension, else `fallback`.
    fn export_kind(&self, fallback: ExportKind) -> Result<ExportKind> {
        if let Some(f) = &self.format {
            return Ok(f.parse()?);
        }
        Ok(self.out.as_deref().and_then(ExportKind::from_path).unwrap_or(fallback))
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn label_of(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn load_tree(path: &Path) -> Result<MergeTree> {
    MergeTree::load(path).with_context(|| format!("loading {}", path.display()))
}

fn run(cli: Cli) -> Result<ExitCode> {
    let g = &cli.global;
    match &cli.command {
        Command::Tree { graph, angle } => {
            let graph = connected_part(&g.load(graph)?)?;
            let sg = collapse_equal_adjacent(&direction_filter(&graph, *angle), DEFAULT_COLLAPSE_TOL);
            g.emit(&format!("{}\n", compute_merge_tree(&sg)?.to_json_string()))?;
        }
        Command::Dist { a, b } => {
            let cfg = g.config()?;
            let d = branching_distance_with(&load_tree(a)?, &load_tree(b)?, cfg.mode, cfg.engine)?;
            eprintln!("engine: {}", cfg.engine);
            g.emit(&format!("{d}\n"))?;
        }
        Command::Abd { g: a, h: b, per_frame } => {
            let cfg = g.config()?;
            let (ga, gb) = (g.load(a)?, g.load(b)?);
            let mut text = format!("{}\n", average_branching_distance(&ga, &gb, &cfg)?);
            if *per_frame {
                let values = per_frame_distances(&ga, &gb, &cfg)?;
                text.push_str("frame,angle,distance\n");
                for (i, (w, d)) in frame_angles(cfg.frames)?.angles().iter().zip(values).enumerate() {
                    text.push_str(&format!("{i},{w},{d}\n"));
                }
            }
            g.emit(&text)?;
        }
        Command::Matrix { graphs } => {
            let cfg = g.config()?;
            let loaded = graphs.iter().map(|p| g.load(p)).collect::<Result<Vec<_>>>()?;
            let labels: Vec<String> = graphs.iter().map(|p| label_of(p)).collect();
            let m = distance_matrix(&labels, &loaded, &cfg, g.jobs)?;
            g.emit(&render(Artifact::Matrix(&m), ExportKind::Csv)?)?;
        }
        Command::Cluster { matrix, k } => {
            let m = read_matrix_csv(matrix)?;
            let dend = single_linkage(&m);
            match k {
                Some(k) => {
                    let mut text = String::from("label,cluster\n");
                    for (label, c) in m.labels().iter().zip(cut_clusters(&dend, *k)?) {
                        text.push_str(&format!("{label},{c}\n"));
                    }
                    g.emit(&text)?;
                }
                None => {
                    let mut text = render(Artifact::Dendrogram(&dend), g.export_kind(ExportKind::Newick)?)?;
                    if !text.ends_with('\n') {
                        text.push('\n');
                    }
                    g.emit(&text)?;
                }
            }
        }
        Command::Mds { matrix, dims } => {
            let e = classical_mds(&read_matrix_csv(matrix)?, *dims)?;
            if e.negative_eigenvalues > 0 {
                eprintln!("clamped {} negative eigenvalues", e.negative_eigenvalues);
            }
            g.emit(&render(Artifact::Embedding(&e), g.export_kind(ExportKind::Csv)?)?)?;
        }
        Command::Verify { trials, fixtures } => {
            let opts = VerifyOptions { trials: *trials, seed: g.seed, fixtures: fixtures.clone(), ..VerifyOptions::default() };
            let report = verify::run(&opts)?;
            g.emit(&format!("{report}\n"))?;
            if !report.passed() {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Gen { kind, count, noise } => {
            let Some(dir) = &g.out else { bail!("gen needs --out DIR") };
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let format = match &g.format {
                Some(f) => f.parse()?,
                None => GraphFormat::Json,
            };
            let ext = match format {
                GraphFormat::Json => "json",
                GraphFormat::EdgeList => "txt",
            };
            let named: Vec<(String, EmbeddedGraph)> = match kind {
                GenKind::Shapes => synth::shape_dataset(*count, *noise, g.seed)
                    .into_iter()
                    .map(|(name, _, graph)| (name, graph))
                    .collect(),
                GenKind::Convex => synth::convex_polygons(*count, g.seed)
                    .into_iter()
                    .enumerate()
                    .map(|(i, graph)| (format!("convex{i}"), graph))
                    .collect(),
                GenKind::Smooth => synth::smooth_shapes(*count, verify::SMOOTH_SAMPLES, g.seed)
                    .into_iter()
                    .enumerate()
                    .map(|(i, graph)| (format!("smooth{i}"), graph))
                    .collect(),
            };
            for (name, graph) in &named {
                write_graph(graph, dir.join(format!("{name}.{ext}")), format)?;
            }
            eprintln!("wrote {} graphs to {}", named.len(), dir.display());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
