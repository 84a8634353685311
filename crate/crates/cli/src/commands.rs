use std::collections::BTreeSet;
use std::fmt;
use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use anyhow::{bail, Context, Result};
use latpoly::dataio::{
    augment, build_dataset, default_variants, enumerate_reflexive_polygons, generate_with, label, label_basic,
    label_records, read_feature_csv, read_jsonl, write_feature_csv, GeneratorConfig, LabelKind, PolytopeRecord,
};
use latpoly::mds::{mds_embed, Embedding};
use latpoly::mlkit::metrics::{classification_accuracy, evaluate_regression, pmcc, Bin};
use latpoly::mlkit::{
    fine_tune, group_kfold_split, train_mlp, train_test_split, AdamConfig, Architecture, Dataset, Encoding, EpochLog,
    ForestConfig, Loss, MlpModel, RandomForest, Task, TrainConfig,
};
use latpoly::pluecker::{identity_order, pluecker};
use latpoly::Polytope;
use serde::{Deserialize, Serialize};

use crate::output::{num, with_config_comment, write_csv, write_records, write_text};
use crate::svg;
use crate::{
    Cli, Command, DatasetCommand, EncodingArgs, EvalArgs, GenArgs, MdsArgs, ModelKind, PlotArgs, PlotKind, TaskKind,
    TrainArgs,
};

/// Contradictory or invalid command-line configuration.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// 1 for usage and configuration errors, 3 for numeric failures, 2 for
/// everything else (bad or unsuitable data, I/O).
pub fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if cause.downcast_ref::<UsageError>().is_some() {
            return 1;
        }
        if let Some(err) = cause.downcast_ref::<latpoly::Error>() {
            return match err {
                latpoly::Error::Config(_)
                | latpoly::Error::Encoding(_)
                | latpoly::Error::ShapeMismatch { .. }
                | latpoly::Error::UnsupportedDimension(_) => 1,
                latpoly::Error::Diverged { .. } => 3,
                _ => 2,
            };
        }
    }
    2
}

pub fn run(cli: &Cli) -> Result<()> {
    let config = serde_json::to_value(&cli.command)?;
    match &cli.command {
        Command::Invariants(a) => invariants(&a.input, a.out.as_deref(), &config),
        Command::Dataset(DatasetCommand::Gen(a)) => dataset_gen(a, &config),
        Command::Dataset(DatasetCommand::Label(a)) => {
            let mut records = load_records(&a.input)?;
            label_records(&mut records, !a.skip_codimension)?;
            write_records(&a.out, &config, &records)
        }
        Command::Dataset(DatasetCommand::Augment(a)) => {
            let records = load_records(&a.input)?;
            let dim = records.first().map_or(2, |r| r.polytope.dim());
            let rows = augment(&records, a.variants.unwrap_or_else(|| default_variants(dim)), a.seed)?;
            write_records(&a.out, &config, &rows)
        }
        Command::Dataset(DatasetCommand::Features(a)) => {
            let records = load_records(&a.input)?;
            let (encoding, label) = parse_encoding(&a.encoding)?;
            let (data, _) = build_dataset(&records, encoding, label, a.encoding.pad_to)?;
            let mut buf = Vec::new();
            write_feature_csv(&mut buf, &data)?;
            write_text(&a.out, &with_config_comment(&config, &buf)?)
        }
        Command::Train(a) => train(a, &config),
        Command::Eval(a) => eval(a, &config),
        Command::Mds(a) => mds(a, &config),
        Command::EnumerateReflexive2d(a) => {
            let classes = enumerate_reflexive_polygons(a.max_coord)?;
            let mut records = Vec::new();
            for (i, p) in classes.into_iter().enumerate() {
                println!("{i}: {:?}", p.vertices_i64()?);
                let mut r = PolytopeRecord::new(i as u64, p);
                r.labels = Some(match label(&r.polytope) {
                    Err(latpoly::Error::NonSaturatedLattice(_)) => label_basic(&r.polytope)?,
                    other => other?,
                });
                records.push(r);
            }
            println!("{} reflexive polygons up to equivalence", records.len());
            match &a.out {
                Some(out) => write_records(out, &config, &records),
                None => Ok(()),
            }
        }
        Command::Plot(a) => plot(a, &config),
    }
}

fn load_records(path: &Path) -> Result<Vec<PolytopeRecord>> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    read_jsonl(BufReader::new(f)).with_context(|| format!("reading {}", path.display()))
}

fn parse_encoding(a: &EncodingArgs) -> Result<(Encoding, LabelKind)> {
    let encoding: Encoding = a.encoding.parse().map_err(|e| usage(format!("{e}")))?;
    let label: LabelKind = a.label.parse().map_err(|e| usage(format!("{e}")))?;
    Ok((encoding, label))
}

fn parse_bins(bins: &[String]) -> Result<Vec<Bin>> {
    bins.iter().map(|b| b.parse::<Bin>().map_err(|e| usage(format!("{e}")))).collect()
}

fn invariants(input: &Path, out: Option<&Path>, config: &serde_json::Value) -> Result<()> {
    let mut records = load_records(input)?;
    if records.is_empty() {
        return match out {
            Some(path) => write_records(path, config, &records),
            None => Ok(()),
        };
    }
    println!("id: volume, dual_volume, gorenstein_index, reflexive, codimension  plucker");
    for r in &mut records {
        let labels = match label(&r.polytope) {
            Err(latpoly::Error::NonSaturatedLattice(index)) => label_basic(&r.polytope).map(|l| (l, Err(index))),
            other => other.and_then(|l| {
                let coords = pluecker(&r.polytope, &identity_order(&r.polytope))?.to_i64()?;
                Ok((l, Ok(coords)))
            }),
        };
        match labels {
            Ok((l, coords)) => {
                let codim = l.codimension.map_or("-".into(), |c| c.to_string());
                let coords_text = match &coords {
                    Ok(c) => c.iter().map(i64::to_string).collect::<Vec<_>>().join(","),
                    Err(index) => format!("undefined: vertex sublattice of index {index}"),
                };
                println!(
                    "{}: {}, {}, {}, {}, {}  ({coords_text})",
                    r.id, l.volume, l.dual_volume, l.gorenstein_index, l.reflexive, codim
                );
                r.labels = Some(l);
                r.plucker = coords.map(|c| vec![c]).unwrap_or_default();
            }
            Err(e) => println!("{}: error: {e}", r.id),
        }
    }
    match out {
        Some(path) => {
            let labeled: Vec<PolytopeRecord> = records.into_iter().filter(|r| r.labels.is_some()).collect();
            write_records(path, config, &labeled)
        }
        None => Ok(()),
    }
}

fn dataset_gen(a: &GenArgs, config: &serde_json::Value) -> Result<()> {
    if a.dim != 2 && a.dim != 3 {
        return Err(usage(format!("--dim must be 2 or 3, got {}", a.dim)));
    }
    let max_coord = a.max_coord.unwrap_or(if a.dim == 2 { 5 } else { 3 });
    let gen = GeneratorConfig {
        dim: a.dim,
        count: a.count,
        max_coord,
        max_gorenstein: if a.dim == 2 { a.max_gorenstein } else { u64::MAX },
        seed: a.seed,
        vertex_counts: a.vertex_counts.clone(),
        reflexive: a.reflexive,
        max_failed_attempts: a.max_failed_attempts,
    };
    let records: Vec<PolytopeRecord> =
        generate_with(&gen)?.into_iter().enumerate().map(|(i, p)| PolytopeRecord::new(i as u64, p)).collect();
    log::info!("generated {} polytopes", records.len());
    write_records(&a.out, config, &records)
}

/// Feature rows plus the vertex count of the polytope behind each row.
struct Loaded {
    data: Dataset,
    vertex_counts: Vec<Option<usize>>,
    encoding: Option<Encoding>,
    label: Option<LabelKind>,
    pad_to: usize,
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn load_data(
    path: &Path,
    encoding: Option<Encoding>,
    label: Option<LabelKind>,
    pad_to: Option<usize>,
) -> Result<Loaded> {
    if is_csv(path) {
        let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
        let data = read_feature_csv(f).with_context(|| format!("reading {}", path.display()))?;
        if pad_to.is_some_and(|p| p != data.dim()) {
            bail!(latpoly::Error::ShapeMismatch { expected: pad_to.unwrap_or(0), got: data.dim() });
        }
        let n = data.len();
        let pad_to = data.dim();
        return Ok(Loaded { data, vertex_counts: vec![None; n], encoding: None, label, pad_to });
    }
    let (Some(enc), Some(lab)) = (encoding, label) else {
        return Err(usage("JSONL input needs an encoding and a label"));
    };
    let records = load_records(path)?;
    let (data, width) = build_dataset(&records, enc, lab, pad_to)?;
    let vertex_counts = records
        .iter()
        .flat_map(|r| std::iter::repeat(Some(r.polytope.num_vertices())).take(r.plucker.len().max(1)))
        .collect();
    Ok(Loaded { data, vertex_counts, encoding: Some(enc), label: Some(lab), pad_to: width })
}

#[derive(Serialize, Deserialize)]
enum ModelBody {
    Mlp(MlpModel),
    Forest(RandomForest),
}

#[derive(Serialize, Deserialize)]
struct SavedModel {
    config: serde_json::Value,
    encoding: Option<Encoding>,
    label: Option<LabelKind>,
    pad_to: usize,
    task: Task,
    model: ModelBody,
}

impl SavedModel {
    fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| {
            anyhow::Error::new(latpoly::Error::Parse { line: e.line(), msg: e.to_string() })
                .context(format!("reading model {}", path.display()))
        })
    }

    fn save(&self, path: &Path) -> Result<()> {
        write_text(path, &(serde_json::to_string_pretty(self)? + "\n"))
    }

    fn predict(&self, x: &[f64]) -> Result<f64> {
        Ok(match (&self.model, self.task) {
            (ModelBody::Mlp(m), Task::Regression) => m.predict(x)?,
            (ModelBody::Mlp(m), Task::Classification) => m.predict_class(x)? as f64,
            (ModelBody::Forest(f), _) => f.predict(x)? as f64,
        })
    }
}

fn train_config(a: &TrainArgs, arch: &Architecture, task: Task) -> Result<TrainConfig> {
    let polytope = a.arch == "polytope";
    let base = if polytope { TrainConfig::polytope(a.seed) } else { TrainConfig::polygon(a.seed) };
    let loss = match (&a.loss, task) {
        (Some(l), _) => l.parse::<Loss>().map_err(|e| usage(format!("{e}")))?,
        (None, Task::Classification) => Loss::CrossEntropy,
        (None, Task::Regression) => base.loss,
    };
    if arch.hidden.is_empty() && task == Task::Classification {
        log::warn!("classifier without hidden layers");
    }
    Ok(TrainConfig {
        batch_size: a.batch_size.unwrap_or(base.batch_size),
        epochs: a.epochs.unwrap_or(base.epochs),
        loss,
        adam: AdamConfig { learning_rate: a.learning_rate, ..AdamConfig::default() },
        seed: a.seed,
        standardize: !a.no_standardize,
    })
}

fn log_rows(log: &[EpochLog]) -> Vec<Vec<String>> {
    log.iter().map(|e| vec![e.epoch.to_string(), num(e.train_loss), e.val_loss.map(num).unwrap_or_default()]).collect()
}

/// Metrics table rows: one per vertex count present plus an `all` row.
struct MetricsTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl MetricsTable {
    fn new(task: Task, bins: &[Bin]) -> Self {
        let mut header: Vec<String> =
            ["property", "encoding", "n", "fold", "rows"].iter().map(|s| s.to_string()).collect();
        match task {
            Task::Regression => {
                header.extend(["mae", "mape", "mse", "pmcc"].iter().map(|s| s.to_string()));
                header.extend(bins.iter().map(|b| format!("acc_{b}")));
            }
            Task::Classification => header.push("accuracy".into()),
        }
        Self { header, rows: Vec::new() }
    }

    #[allow(clippy::too_many_arguments)]
    fn add(
        &mut self,
        task: Task,
        bins: &[Bin],
        property: &str,
        encoding: &str,
        fold: &str,
        pred: &[f64],
        truth: &[f64],
        counts: &[Option<usize>],
    ) -> Result<()> {
        let groups: BTreeSet<usize> = counts.iter().flatten().copied().collect();
        let mut subsets: Vec<(String, Vec<usize>)> = groups
            .iter()
            .map(|&n| (n.to_string(), (0..truth.len()).filter(|&i| counts[i] == Some(n)).collect()))
            .collect();
        if subsets.len() != 1 {
            subsets.push(("all".into(), (0..truth.len()).collect()));
        }
        for (n, idx) in subsets {
            let p: Vec<f64> = idx.iter().map(|&i| pred[i]).collect();
            let t: Vec<f64> = idx.iter().map(|&i| truth[i]).collect();
            let mut row = vec![property.to_string(), encoding.to_string(), n, fold.to_string(), t.len().to_string()];
            match task {
                Task::Regression => {
                    let m = evaluate_regression(&p, &t, bins)?;
                    row.extend([num(m.mae), m.mape.map(num).unwrap_or_default(), num(m.mse), num(m.pmcc)]);
                    row.extend(m.accuracies.iter().map(|a| num(a.accuracy)));
                }
                Task::Classification => {
                    let classes: Vec<usize> = p.iter().map(|&v| usize::from(v >= 0.5)).collect();
                    row.push(num(classification_accuracy(&classes, &t)?));
                }
            }
            self.rows.push(row);
        }
        Ok(())
    }
}

fn train(a: &TrainArgs, config: &serde_json::Value) -> Result<()> {
    if a.folds.is_some() && a.train_frac.is_some() {
        return Err(usage("--folds and --train-frac are mutually exclusive"));
    }
    let bins = parse_bins(&a.bins)?;
    let init = a.init_from.as_deref().map(SavedModel::load).transpose()?;
    if a.model == ModelKind::Forest && init.is_some() {
        return Err(usage("--init-from needs an MLP"));
    }
    let (encoding, label) = parse_encoding(&a.encoding)?;
    let pad_to = a.encoding.pad_to.or(init.as_ref().map(|m| m.pad_to));
    let loaded = load_data(&a.input, Some(encoding), Some(label), pad_to)?;
    let task = match a.task {
        Some(TaskKind::Regression) => Task::Regression,
        Some(TaskKind::Classification) => Task::Classification,
        None if label == LabelKind::Reflexive && encoding != Encoding::InverseProblem => Task::Classification,
        None => Task::Regression,
    };
    if a.model == ModelKind::Forest && task != Task::Classification {
        return Err(usage("the random forest is a classifier; use --task classification"));
    }
    if let Some(m) = &init {
        if m.task != task {
            return Err(usage("--init-from model has a different task"));
        }
    }
    let arch: Architecture = a.arch.parse().map_err(|e| usage(format!("{e}")))?;
    let tconf = train_config(a, &arch, task)?;
    let data = &loaded.data;

    let splits: Vec<(String, Vec<usize>, Vec<usize>)> = match (a.folds, a.train_frac) {
        (Some(k), _) => group_kfold_split(&data.groups, k, a.seed)?
            .into_iter()
            .enumerate()
            .map(|(i, (tr, te))| (i.to_string(), tr, te))
            .collect(),
        (None, Some(f)) => {
            let (tr, te) = train_test_split(&data.groups, f, a.seed)?;
            vec![("0".into(), tr, te)]
        }
        (None, None) => vec![("all".into(), (0..data.len()).collect(), Vec::new())],
    };

    let property = label.name();
    let enc_name = loaded.encoding.map_or("csv".to_string(), |e| e.to_string());
    let mut table = MetricsTable::new(task, &bins);
    let mut prediction_rows = Vec::new();
    let (mut all_true, mut all_pred) = (Vec::new(), Vec::new());
    for (fold, train_idx, test_idx) in &splits {
        let train_set = data.subset(train_idx)?;
        let test_set = if test_idx.is_empty() { None } else { Some(data.subset(test_idx)?) };
        let (body, log) = match a.model {
            ModelKind::Forest => {
                let fc = ForestConfig { trees: a.trees, seed: a.seed, ..ForestConfig::default() };
                (ModelBody::Forest(RandomForest::fit(&train_set, &fc)?), Vec::new())
            }
            ModelKind::Mlp => {
                let (m, log) = match &init {
                    Some(SavedModel { model: ModelBody::Mlp(m), .. }) => {
                        fine_tune(m, &train_set, &tconf, test_set.as_ref())?
                    }
                    Some(_) => return Err(usage("--init-from needs an MLP")),
                    None => train_mlp(&train_set, &arch, task, &tconf, test_set.as_ref())?,
                };
                (ModelBody::Mlp(m), log)
            }
        };
        let saved = SavedModel {
            config: config.clone(),
            encoding: loaded.encoding,
            label: loaded.label,
            pad_to: loaded.pad_to,
            task,
            model: body,
        };
        let suffix = if splits.len() == 1 && fold != "0" { String::new() } else { format!("_fold{fold}") };
        saved.save(&a.out_dir.join(format!("model{suffix}.json")))?;
        if !log.is_empty() {
            let header = ["epoch", "train_loss", "val_loss"].map(String::from);
            write_csv(&a.out_dir.join(format!("log{suffix}.csv")), config, &header, &log_rows(&log))?;
        }
        if let Some(test) = &test_set {
            let pred: Vec<f64> = test.features.iter().map(|x| saved.predict(x)).collect::<Result<_>>()?;
            let counts: Vec<Option<usize>> = test_idx.iter().map(|&i| loaded.vertex_counts[i]).collect();
            table.add(task, &bins, property, &enc_name, fold, &pred, &test.labels, &counts)?;
            for (j, &i) in test_idx.iter().enumerate() {
                prediction_rows.push(vec![
                    fold.clone(),
                    i.to_string(),
                    data.groups[i].to_string(),
                    num(test.labels[j]),
                    num(pred[j]),
                ]);
            }
            all_true.extend_from_slice(&test.labels);
            all_pred.extend(pred);
            println!("fold {fold}: {}", table.rows.last().map(|r| r.join(",")).unwrap_or_default());
        }
    }
    if !table.rows.is_empty() {
        write_csv(&a.out_dir.join("metrics.csv"), config, &table.header, &table.rows)?;
        let header = ["fold", "row", "group", "true", "predicted"].map(String::from);
        write_csv(&a.out_dir.join("predictions.csv"), config, &header, &prediction_rows)?;
        if task == Task::Regression {
            write_prediction_svg(&a.out_dir.join("predictions.svg"), property, &all_true, &all_pred, config)?;
        }
    }
    Ok(())
}

fn write_prediction_svg(
    path: &Path,
    property: &str,
    truth: &[f64],
    pred: &[f64],
    config: &serde_json::Value,
) -> Result<()> {
    let title = format!("{property}: predicted against true");
    let chart = svg::Scatter {
        title: &title,
        x_label: "true",
        y_label: "predicted",
        x: truth,
        y: pred,
        color: None,
        diagonal: true,
    };
    write_text(path, &svg::scatter(&chart, &config.to_string()))
}

fn eval(a: &EvalArgs, config: &serde_json::Value) -> Result<()> {
    let bins = parse_bins(&a.bins)?;
    if let Some(path) = &a.predictions {
        let (truth, pred) = read_predictions(path)?;
        let mut table = MetricsTable::new(Task::Regression, &bins);
        table.add(Task::Regression, &bins, "-", "-", "-", &pred, &truth, &vec![None; truth.len()])?;
        println!("{}", table.rows[0].join(","));
        write_csv(&a.out_dir.join("metrics.csv"), config, &table.header, &table.rows)?;
        return write_prediction_svg(&a.out_dir.join("predictions.svg"), "-", &truth, &pred, config);
    }
    let (Some(model_path), Some(input)) = (&a.model, &a.input) else {
        return Err(usage("eval needs --model with --input, or --predictions"));
    };
    let saved = SavedModel::load(model_path)?;
    if saved.encoding.is_none() != is_csv(input) {
        return Err(usage("input format does not match the data the model was trained on"));
    }
    let loaded = load_data(input, saved.encoding, saved.label, Some(saved.pad_to))?;
    let pred: Vec<f64> = loaded.data.features.iter().map(|x| saved.predict(x)).collect::<Result<_>>()?;
    let property = saved.label.map_or("-", |l| l.name());
    let enc_name = saved.encoding.map_or("csv".to_string(), |e| e.to_string());
    let mut table = MetricsTable::new(saved.task, &bins);
    table.add(saved.task, &bins, property, &enc_name, "-", &pred, &loaded.data.labels, &loaded.vertex_counts)?;
    for row in &table.rows {
        println!("{}", row.join(","));
    }
    write_csv(&a.out_dir.join("metrics.csv"), config, &table.header, &table.rows)?;
    let rows: Vec<Vec<String>> = loaded
        .data
        .labels
        .iter()
        .zip(&pred)
        .enumerate()
        .map(|(i, (t, p))| vec![i.to_string(), num(*t), num(*p)])
        .collect();
    write_csv(&a.out_dir.join("predictions.csv"), config, &["row", "true", "predicted"].map(String::from), &rows)?;
    if saved.task == Task::Regression {
        write_prediction_svg(&a.out_dir.join("predictions.svg"), property, &loaded.data.labels, &pred, config)?;
    }
    Ok(())
}

fn csv_reader(path: &Path) -> Result<csv::Reader<File>> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(f))
}

/// Named numeric columns of a headed CSV file.
fn read_columns(path: &Path, names: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut r = csv_reader(path)?;
    let header = r.headers()?.clone();
    let idx: Vec<usize> = names
        .iter()
        .map(|n| {
            header
                .iter()
                .position(|h| h == *n)
                .ok_or_else(|| anyhow::Error::new(latpoly::Error::Parse { line: 1, msg: format!("no column {n:?}") }))
        })
        .collect::<Result<_>>()?;
    let mut cols = vec![Vec::new(); names.len()];
    for rec in r.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        for (c, &i) in idx.iter().enumerate() {
            let field = rec.get(i).unwrap_or("");
            let v = field
                .trim()
                .parse::<f64>()
                .map_err(|_| latpoly::Error::Parse { line, msg: format!("bad number {field:?}") })?;
            cols[c].push(v);
        }
    }
    Ok(cols)
}

fn read_predictions(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut cols = read_columns(path, &["true", "predicted"])?;
    let pred = cols.pop().unwrap_or_default();
    let truth = cols.pop().unwrap_or_default();
    if truth.is_empty() {
        bail!(latpoly::Error::EmptyInput);
    }
    Ok((truth, pred))
}

fn mds(a: &MdsArgs, config: &serde_json::Value) -> Result<()> {
    let records = load_records(&a.input)?;
    let (encoding, label) = parse_encoding(&a.encoding)?;
    let (data, _) = build_dataset(&records, encoding, label, a.encoding.pad_to)?;
    let k = usize::from(a.components);
    let e: Embedding = mds_embed(&data.features, k, a.max_iter, a.tol, a.seed)?;
    let mut buf = Vec::new();
    e.write_csv(&mut buf, Some(&data.labels))?;
    write_text(&a.out_dir.join("embedding.csv"), &with_config_comment(config, &buf)?)?;
    let stress_rows: Vec<Vec<String>> =
        e.stress_log.iter().enumerate().map(|(i, s)| vec![i.to_string(), num(*s)]).collect();
    write_csv(&a.out_dir.join("stress.csv"), config, &["iteration", "stress"].map(String::from), &stress_rows)?;
    let (r, _) = pmcc(&e.norms(), &data.labels);
    println!("stress {} after {} iterations; pmcc(|x|, {}) = {r:.4}", e.stress, e.iterations, label.name());
    let x0: Vec<f64> = e.points.iter().map(|p| p[0]).collect();
    let title = format!("MDS of {} vectors, colored by {}", encoding, label.name());
    let chart = if k == 2 {
        let x1: Vec<f64> = e.points.iter().map(|p| p[1]).collect();
        svg::scatter(
            &svg::Scatter {
                title: &title,
                x_label: "x0",
                y_label: "x1",
                x: &x0,
                y: &x1,
                color: Some(&data.labels),
                diagonal: false,
            },
            &config.to_string(),
        )
    } else {
        svg::scatter(
            &svg::Scatter {
                title: &title,
                x_label: "x0",
                y_label: label.name(),
                x: &x0,
                y: &data.labels,
                color: Some(&data.labels),
                diagonal: false,
            },
            &config.to_string(),
        )
    };
    write_text(&a.out_dir.join("mds.svg"), &chart)
}

fn plot(a: &PlotArgs, config: &serde_json::Value) -> Result<()> {
    let text = match a.kind {
        PlotKind::Histogram => {
            let kind: LabelKind = a.label.parse().map_err(|e| usage(format!("{e}")))?;
            let records = load_records(&a.input)?;
            let values: Vec<f64> = records
                .iter()
                .map(|r| {
                    r.labels
                        .as_ref()
                        .ok_or_else(|| {
                            anyhow::Error::new(latpoly::Error::Config(format!("record {} has no labels", r.id)))
                        })
                        .and_then(|l| Ok(l.value(kind)?))
                })
                .collect::<Result<_>>()?;
            svg::histogram(&format!("distribution of {}", kind.name()), kind.name(), &values, &config.to_string())
        }
        PlotKind::Scatter => {
            let (Some(x), Some(y)) = (&a.x, &a.y) else {
                return Err(usage("scatter plots need --x and --y"));
            };
            let mut names = vec![x.as_str(), y.as_str()];
            if let Some(c) = &a.color {
                names.push(c);
            }
            let cols = read_columns(&a.input, &names)?;
            svg::scatter(
                &svg::Scatter {
                    title: &format!("{y} against {x}"),
                    x_label: x,
                    y_label: y,
                    x: &cols[0],
                    y: &cols[1],
                    color: cols.get(2).map(Vec::as_slice),
                    diagonal: a.diagonal,
                },
                &config.to_string(),
            )
        }
    };
    write_text(&a.out, &text)
}
