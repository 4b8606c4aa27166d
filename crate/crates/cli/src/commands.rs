//! One function per subcommand. These only resolve inputs, call into
//! `fpv_core` and write results.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use fpv_core::axes::{
    build_axis_set, compose_fairness_vector, default_pole_pairs, load_pole_pairs,
};
use fpv_core::corpus::{exporter_sentences, load_corpus, BundledCorpus, PROBE_TEXTS};
use fpv_core::evaluation::{
    approach2_seed_sweep, cluster_agreement, load_sentiment, run_approach1, run_approach2,
    score_corpus, scoring_direction, sentiment_correlation, write_predictions_csv, EvalReport,
};
use fpv_core::ml::{LogRegConfig, SplitSpec};
use fpv_core::scoring::{
    build_dataset, score_sentence, write_features_csv, write_scores_csv, ScoreMethod,
};
use fpv_core::subspace::{
    build_basis, cluster_projections, project, write_projections_csv, Projection,
};
use fpv_core::{AxisSet, EmbeddingStore, LabeledCorpus};
use serde::Serialize;

use crate::args::*;
use crate::config::{parse_seed_list, RunConfig};
use crate::CliError;

type Result<T> = std::result::Result<T, CliError>;

const DEFAULT_CORPUS: &str = "full";

struct Context {
    config: RunConfig,
    store: EmbeddingStore,
    axes: AxisSet,
    corpus: LabeledCorpus,
}

fn load_context(inputs: &Inputs) -> Result<Context> {
    let config = RunConfig::load(inputs.config.as_deref())?;
    let path = inputs
        .embeddings
        .clone()
        .or_else(|| config.embeddings.clone())
        .ok_or_else(|| CliError::usage("--embeddings is required"))?;
    let store = EmbeddingStore::open(&path)?;
    let poles = match inputs.axes.as_ref().or(config.axes.as_ref()) {
        Some(p) => load_pole_pairs(p)?,
        None => default_pole_pairs(),
    };
    let mut axes = build_axis_set(&poles, &store)?;
    if inputs.unit_axes || config.unit_axes.unwrap_or(false) {
        axes = axes.unit_normalized()?;
    }
    let corpus_spec = inputs
        .corpus
        .clone()
        .or_else(|| config.corpus.clone())
        .unwrap_or_else(|| DEFAULT_CORPUS.to_string());
    let corpus = resolve_corpus(&corpus_spec)?;
    Ok(Context {
        config,
        store,
        axes,
        corpus,
    })
}

fn resolve_corpus(spec: &str) -> Result<LabeledCorpus> {
    let bundled = match spec {
        "full" => Some(BundledCorpus::Full),
        "illustrative" => Some(BundledCorpus::Illustrative),
        _ => None,
    };
    if let Some(b) = bundled {
        return Ok(b.load()?);
    }
    let path = Path::new(spec);
    let file = File::open(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| spec.to_string());
    Ok(load_corpus(&name, file)?)
}

fn score_method(opts: &ScoringOpts, config: &RunConfig) -> ScoreMethod {
    match opts.method.or(config.method).unwrap_or(MethodArg::Fairness) {
        MethodArg::Fairness => ScoreMethod::FairnessVector,
        MethodArg::Baseline => ScoreMethod::BaselineVector,
    }
}

fn threshold(opts: &ScoringOpts, config: &RunConfig) -> f64 {
    opts.threshold.or(config.threshold).unwrap_or(0.0)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)
            .map_err(|e| CliError::io(format!("{}: {e}", parent.display())))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_json<T: Serialize>(value: &T, mut out: impl Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value).map_err(fpv_core::Error::from)?;
    writeln!(out).map_err(io_error)?;
    out.flush().map_err(io_error)?;
    Ok(())
}

fn io_error(e: io::Error) -> CliError {
    CliError::io(e.to_string())
}

fn out_dir(flag: &Option<PathBuf>, config: &RunConfig) -> Option<PathBuf> {
    flag.clone().or_else(|| config.out_dir.clone())
}

fn out_file(flag: &Option<PathBuf>, config: &RunConfig) -> Option<PathBuf> {
    flag.clone().or_else(|| config.out.clone())
}

pub fn export_sentences(args: ExportArgs) -> Result<()> {
    let specs = if args.corpus.is_empty() {
        vec!["illustrative".to_string(), "full".to_string()]
    } else {
        args.corpus
    };
    let corpora = specs
        .iter()
        .map(|s| resolve_corpus(s))
        .collect::<Result<Vec<_>>>()?;
    let probes: &[&str] = if args.no_probes { &[] } else { &PROBE_TEXTS };
    let texts = exporter_sentences(&corpora, !args.no_poles, probes);
    let mut out = sink(args.out.as_deref())?;
    for t in texts {
        writeln!(out, "{t}").map_err(io_error)?;
    }
    out.flush().map_err(io_error)
}

#[derive(Serialize)]
struct AxesSummary<'a> {
    model_id: &'a str,
    dimension: usize,
    axis_checksum: String,
    poles: Vec<&'a fpv_core::PolePair>,
    fairness_vector_norm: f64,
    basis: fpv_core::subspace::BasisSummary,
}

pub fn axes(args: AxesArgs) -> Result<()> {
    let ctx = load_context(&args.inputs)?;
    let basis = build_basis(&ctx.axes)?;
    let summary = AxesSummary {
        model_id: ctx.store.model_id(),
        dimension: ctx.store.dimension(),
        axis_checksum: ctx.axes.checksum(),
        poles: ctx.axes.axes().iter().map(|a| &a.pole).collect(),
        fairness_vector_norm: compose_fairness_vector(&ctx.axes).norm(),
        basis: basis.summary(),
    };
    write_json(&summary, sink(out_file(&args.out, &ctx.config).as_deref())?)
}

pub fn score(args: ScoreArgs) -> Result<()> {
    let ctx = load_context(&args.inputs)?;
    let method = score_method(&args.scoring, &ctx.config);
    let direction = scoring_direction(&ctx.axes, &ctx.store, method)?;
    let scores = if args.text.is_empty() {
        score_corpus(&ctx.corpus, &ctx.store, &direction, method)?
    } else {
        args.text
            .iter()
            .map(|t| score_sentence(t, &direction, &ctx.store, method))
            .collect::<fpv_core::Result<Vec<_>>>()?
    };
    let out = sink(out_file(&args.out, &ctx.config).as_deref())?;
    write_scores_csv(&scores, threshold(&args.scoring, &ctx.config), out)?;
    Ok(())
}

pub fn features(args: FeaturesArgs) -> Result<()> {
    let ctx = load_context(&args.inputs)?;
    let rows = build_dataset(&ctx.corpus, &ctx.axes, &ctx.store)?;
    write_features_csv(&rows, sink(out_file(&args.out, &ctx.config).as_deref())?)?;
    Ok(())
}

fn print_summary(report: &EvalReport) -> Result<()> {
    let counts = &report.config.corpus_counts;
    let text = format!(
        "method: {}\nmodel: {}\ncorpus: {} ({} fair, {} unfair); evaluated {}\n{}\nprecision {:.4}  recall {:.4}  f1 {:.4}{}\n",
        report.method.as_str(),
        report.config.model_id,
        report.config.corpus_name,
        counts.fair,
        counts.unfair,
        report.evaluated,
        report.matrix,
        report.precision,
        report.recall,
        report.f1,
        if report.degenerate { "  (degenerate)" } else { "" }
    );
    io::stdout()
        .lock()
        .write_all(text.as_bytes())
        .map_err(io_error)
}

pub fn eval_approach1(args: Approach1Args) -> Result<()> {
    let ctx = load_context(&args.inputs)?;
    let method = score_method(&args.scoring, &ctx.config);
    let threshold = threshold(&args.scoring, &ctx.config);
    let outcome = run_approach1(&ctx.corpus, &ctx.store, &ctx.axes, method, threshold)?;
    if let Some(dir) = out_dir(&args.report.out_dir, &ctx.config) {
        write_json(&outcome.report, create(&dir.join("report.json"))?)?;
        write_scores_csv(&outcome.scores, threshold, create(&dir.join("scores.csv"))?)?;
    }
    if args.report.json {
        write_json(&outcome.report, io::stdout().lock())
    } else {
        print_summary(&outcome.report)
    }
}

pub fn eval_approach2(args: Approach2Args) -> Result<()> {
    let ctx = load_context(&args.inputs)?;
    let c = &ctx.config;
    let defaults = LogRegConfig::default();
    let logreg = LogRegConfig {
        learning_rate: args
            .learning_rate
            .or(c.learning_rate)
            .unwrap_or(defaults.learning_rate),
        max_iterations: args
            .max_iterations
            .or(c.max_iterations)
            .unwrap_or(defaults.max_iterations),
        tolerance: args.tolerance.or(c.tolerance).unwrap_or(defaults.tolerance),
        l2_penalty: args.l2.or(c.l2).unwrap_or(defaults.l2_penalty),
    };
    let test_fraction = args
        .test_fraction
        .or(c.test_fraction)
        .unwrap_or(SplitSpec::DEFAULT_TEST_FRACTION);
    let pca_variance = args.pca_variance.or(c.pca_variance).unwrap_or(0.95);
    let dir = out_dir(&args.report.out_dir, c);

    if let Some(list) = args.seeds.as_ref().or(c.seeds.as_ref()) {
        let seeds = parse_seed_list(list)?;
        let rows = build_dataset(&ctx.corpus, &ctx.axes, &ctx.store)?;
        let sweep = approach2_seed_sweep(&rows, &seeds, test_fraction, pca_variance, &logreg)?;
        if let Some(dir) = dir {
            write_json(&sweep, create(&dir.join("sweep.json"))?)?;
        }
        if args.report.json {
            return write_json(&sweep, io::stdout().lock());
        }
        println!(
            "seeds {}: mean f1 {:.4}, std {:.4}",
            list, sweep.mean_f1, sweep.std_f1
        );
        return Ok(());
    }

    let seed = args
        .seed
        .or(c.seed)
        .ok_or_else(|| CliError::usage("--seed (or --seeds) is required"))?;
    let spec = SplitSpec::new(test_fraction, seed)?;
    let outcome = run_approach2(
        &ctx.corpus,
        &ctx.store,
        &ctx.axes,
        &spec,
        pca_variance,
        &logreg,
    )?;
    if let Some(dir) = dir {
        write_json(&outcome.report, create(&dir.join("report.json"))?)?;
        write_predictions_csv(
            &ctx.corpus,
            &outcome.predictions,
            create(&dir.join("predictions.csv"))?,
        )?;
    }
    if args.report.json {
        write_json(&outcome.report, io::stdout().lock())
    } else {
        print_summary(&outcome.report)
    }
}

fn project_corpus(ctx: &Context) -> Result<(Vec<String>, Vec<Projection>)> {
    let basis = build_basis(&ctx.axes)?;
    let texts: Vec<String> = ctx
        .corpus
        .sentences()
        .iter()
        .map(|s| s.text.clone())
        .collect();
    let projections = texts
        .iter()
        .map(|t| project(&basis, ctx.store.lookup(t)?))
        .collect::<fpv_core::Result<Vec<_>>>()?;
    Ok((texts, projections))
}

pub fn project_cmd(args: ProjectArgs) -> Result<()> {
    let ctx = load_context(&args.inputs)?;
    let (texts, projections) = project_corpus(&ctx)?;
    let clusters = match args.clusters.or(ctx.config.clusters) {
        Some(k) => {
            let seed = args
                .seed
                .or(ctx.config.seed)
                .ok_or_else(|| CliError::usage("--seed is required with --clusters"))?;
            let points: Vec<&[f64]> = projections
                .iter()
                .map(|p| p.coefficients.as_slice())
                .collect();
            Some(cluster_projections(&points, k, seed)?.assignments)
        }
        None => None,
    };
    let out = sink(out_file(&args.out, &ctx.config).as_deref())?;
    write_projections_csv(&texts, &projections, clusters.as_deref(), out)?;
    Ok(())
}

#[derive(Serialize)]
struct ClusterSummary {
    k: usize,
    seed: u64,
    iterations: usize,
    inertia: f64,
    sizes: Vec<usize>,
    centroids: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    label_agreement: Option<fpv_core::evaluation::ClusterAgreement>,
    corpus_checksum: String,
    axis_checksum: String,
    model_id: String,
}

pub fn cluster(args: ClusterArgs) -> Result<()> {
    let ctx = load_context(&args.inputs)?;
    let k = args.k.or(ctx.config.k).unwrap_or(2);
    let seed = args
        .seed
        .or(ctx.config.seed)
        .ok_or_else(|| CliError::usage("--seed is required"))?;
    let (texts, projections) = project_corpus(&ctx)?;
    let points: Vec<&[f64]> = projections
        .iter()
        .map(|p| p.coefficients.as_slice())
        .collect();
    let clustering = cluster_projections(&points, k, seed)?;
    let mut sizes = vec![0; k];
    for &a in &clustering.assignments {
        sizes[a] += 1;
    }
    let summary = ClusterSummary {
        k,
        seed,
        iterations: clustering.iterations,
        inertia: clustering.inertia(),
        sizes,
        centroids: clustering.centroids.clone(),
        label_agreement: if k == 2 {
            Some(cluster_agreement(
                &clustering.assignments,
                &ctx.corpus.labels(),
            )?)
        } else {
            None
        },
        corpus_checksum: ctx.corpus.checksum().to_string(),
        axis_checksum: ctx.axes.checksum(),
        model_id: ctx.store.model_id().to_string(),
    };
    match out_dir(&args.out_dir, &ctx.config) {
        Some(dir) => {
            write_projections_csv(
                &texts,
                &projections,
                Some(&clustering.assignments),
                create(&dir.join("projections.csv"))?,
            )?;
            write_json(&summary, create(&dir.join("clusters.json"))?)
        }
        None => write_json(&summary, io::stdout().lock()),
    }
}

#[derive(Serialize)]
struct Correlation {
    method: ScoreMethod,
    n: usize,
    pearson_r: f64,
    model_id: String,
    corpus_checksum: String,
}

pub fn correlate(args: CorrelateArgs) -> Result<()> {
    let ctx = load_context(&args.inputs)?;
    let path = args
        .sentiment
        .clone()
        .or_else(|| ctx.config.sentiment.clone())
        .ok_or_else(|| CliError::usage("--sentiment is required"))?;
    let file = File::open(&path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    let sentiment = load_sentiment(file)?;
    let method = score_method(&args.scoring, &ctx.config);
    let direction = scoring_direction(&ctx.axes, &ctx.store, method)?;
    let scores = score_corpus(&ctx.corpus, &ctx.store, &direction, method)?;
    let r = sentiment_correlation(&scores, &sentiment)?;
    write_json(
        &Correlation {
            method,
            n: scores.len(),
            pearson_r: r,
            model_id: ctx.store.model_id().to_string(),
            corpus_checksum: ctx.corpus.checksum().to_string(),
        },
        io::stdout().lock(),
    )
}
