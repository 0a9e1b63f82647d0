use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use serde::Serialize;

use scidetect::corpus::{
    build_prompt, generate_many, label_counts, read_jsonl, split_corpus, write_jsonl, Domain,
    GenClientConfig, LabeledRecord, Source, Split,
};
use scidetect::detector::{fit_group, DetectorError, FitOptions, LogitModel};
use scidetect::eval::{classification_table, confusion, prf, ConfusionMatrix, Prf, RegressionReport};
use scidetect::explain::{explain_prediction, ExplainConfig, Explanation};
use scidetect::features::{
    embedding_words, feature_index, read_feature_csv, write_feature_csv, EmbeddingModel,
    FeatureExtractor, FeatureRow,
};
use scidetect::lm::{calibrate_threshold, NGramConfig, NGramModel, PerplexityThreshold};
use scidetect::textproc::{Lexicons, TokenizedDocument};
use scidetect::Label;

use crate::io::{
    check_inputs, check_outputs, data_err, runtime_err, write_atomic, Classify, Outcome, Provenance,
};
use crate::{
    CalibrateArgs, Cli, Command, DetectArgs, EvaluateArgs, ExplainArgs, FeaturizeArgs,
    GenerateArgs, IngestArgs, SplitArg, TextArgs, TrainArgs, TrainLmArgs,
};

/// Diagnostic stream gated by `-q` / `-v`.
struct Log(i8);

impl Log {
    fn info(&self, msg: impl AsRef<str>) {
        if self.0 >= 0 {
            eprintln!("{}", msg.as_ref());
        }
    }

    fn debug(&self, msg: impl AsRef<str>) {
        if self.0 >= 1 {
            eprintln!("{}", msg.as_ref());
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let log = Log(if cli.quiet { -1 } else { cli.verbose.min(100) as i8 });
    let seed = cli.seed;
    match &cli.command {
        Command::Ingest(a) => ingest(a, seed, &log),
        Command::Generate(a) => generate(a, seed, &log),
        Command::TrainLm(a) => train_lm(a, seed, &log),
        Command::Featurize(a) => featurize(a, seed, &log),
        Command::CalibratePpl(a) => calibrate(a, seed, &log),
        Command::Train(a) => train(a, seed, &log),
        Command::Evaluate(a) => evaluate(a, seed, &log),
        Command::Detect(a) => detect(a, seed),
        Command::Explain(a) => explain(a, seed, &log),
    }
}

fn load_records(prov: &mut Provenance, path: &Path) -> Outcome<Vec<LabeledRecord>> {
    let bytes = prov.read(path)?;
    read_jsonl(bytes.as_slice()).data(format!("{}", path.display()))
}

fn load_rows(prov: &mut Provenance, path: &Path) -> Outcome<Vec<FeatureRow>> {
    let bytes = prov.read(path)?;
    let rows = read_feature_csv(bytes.as_slice()).data(format!("{}", path.display()))?;
    if rows.is_empty() {
        return Err(data_err(format!("{} has no rows", path.display())));
    }
    Ok(rows)
}

fn load_lm(prov: &mut Provenance, path: &Path) -> Outcome<NGramModel> {
    let text = prov.read_text(path)?;
    NGramModel::from_json(&text).data(format!("{}", path.display()))
}

fn load_embedding(prov: &mut Provenance, path: &Path) -> Outcome<EmbeddingModel> {
    prov.record(path)?;
    EmbeddingModel::load(path).data("loading embedding")
}

fn load_model(prov: &mut Provenance, path: &Path) -> Outcome<LogitModel> {
    let text = prov.read_text(path)?;
    LogitModel::from_json(&text).data(format!("{}", path.display()))
}

fn split_matches(record: &LabeledRecord, split: Option<SplitArg>) -> bool {
    match split {
        None => true,
        Some(SplitArg::Train) => record.split == Some(Split::Train),
        Some(SplitArg::Test) => record.split == Some(Split::Test),
    }
}

fn collapse_whitespace(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn ingest(a: &IngestArgs, seed: u64, log: &Log) -> Outcome {
    check_inputs(&[&a.input])?;
    check_outputs(&[&a.out])?;
    if let Some(f) = a.train_fraction {
        if !(f > 0.0 && f < 1.0) {
            return Err(data_err(format!("--train-fraction {f} is not in (0, 1)")));
        }
    }
    let mut prov = Provenance::new("ingest", seed);
    let mut records = load_records(&mut prov, &a.input)?;
    for r in &mut records {
        r.title = collapse_whitespace(&r.title);
        r.abstract_text = collapse_whitespace(&r.abstract_text);
    }
    if let Some(f) = a.train_fraction {
        let (train, _) = split_corpus(&records, f, seed).data("splitting")?;
        let train_ids: std::collections::HashSet<&str> = train.iter().map(|r| r.id.as_str()).collect();
        let assigned: Vec<Option<Split>> = records
            .iter()
            .map(|r| Some(if train_ids.contains(r.id.as_str()) { Split::Train } else { Split::Test }))
            .collect();
        for (r, s) in records.iter_mut().zip(assigned) {
            r.split = s;
        }
    }
    write_atomic(&a.out, write_jsonl(&records).as_bytes())?;
    prov.write_sidecar(&a.out)?;
    let (ai, human) = label_counts(&records);
    log.info(format!(
        "wrote {} records ({ai} AI, {human} human) to {}",
        records.len(),
        a.out.display()
    ));
    Ok(())
}

fn parse_titles(text: &str, default: Domain) -> Outcome<Vec<(Domain, String)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (domain, title) = match line.split_once('\t') {
            Some((d, t)) => (
                d.parse::<Domain>().data(format!("titles line {}", i + 1))?,
                t.trim(),
            ),
            None => (default, line),
        };
        if title.is_empty() {
            return Err(data_err(format!("titles line {}: empty title", i + 1)));
        }
        out.push((domain, title.to_string()));
    }
    if out.is_empty() {
        return Err(data_err("titles file has no titles"));
    }
    Ok(out)
}

fn generate(a: &GenerateArgs, seed: u64, log: &Log) -> Outcome {
    check_inputs(&[&a.titles])?;
    check_outputs(&[&a.out])?;
    let default_domain: Domain = a.domain.parse().data("--domain")?;
    let base = GenClientConfig::default();
    let config = GenClientConfig {
        endpoint_url: a.endpoint.clone().unwrap_or(base.endpoint_url),
        api_key_env: a.api_key_env.clone().unwrap_or(base.api_key_env),
        model_name: a.model.clone().unwrap_or(base.model_name),
        max_tokens: a.max_tokens.unwrap_or(base.max_tokens),
        temperature: a.temperature.unwrap_or(base.temperature),
        retry_limit: a.retries.unwrap_or(base.retry_limit),
        timeout_secs: a.timeout_secs.unwrap_or(base.timeout_secs),
        backoff_base_ms: a.backoff_ms.unwrap_or(base.backoff_base_ms),
        max_in_flight: a.concurrency.unwrap_or(base.max_in_flight),
    };
    config.validate().data("client settings")?;
    if std::env::var(&config.api_key_env).map_or(true, |k| k.is_empty()) {
        return Err(runtime_err(format!(
            "environment variable {} is not set",
            config.api_key_env
        )));
    }

    let mut prov = Provenance::new("generate", seed);
    let titles = parse_titles(&prov.read_text(&a.titles)?, default_domain)?;
    let prompts = titles
        .iter()
        .map(|(d, t)| build_prompt(t, *d))
        .collect::<Result<Vec<_>, _>>()
        .data("building prompts")?;
    log.info(format!("requesting {} completions from {}", prompts.len(), config.endpoint_url));
    let results = generate_many(&config, &prompts);

    let mut records = Vec::new();
    let mut failed = 0usize;
    for (i, ((domain, title), result)) in titles.iter().zip(results).enumerate() {
        let record = result.map_err(|e| e.to_string()).and_then(|text| {
            let r = LabeledRecord {
                id: format!("{}{:04}", a.id_prefix, i + 1),
                source: Source::Other,
                domain: *domain,
                title: title.clone(),
                abstract_text: collapse_whitespace(&text),
                label: Label::Ai,
                generator: config.model_name.clone(),
                split: None,
                extra: Default::default(),
            };
            r.validate().map(|_| r).map_err(|e| e.to_string())
        });
        match record {
            Ok(r) => records.push(r),
            Err(e) => {
                failed += 1;
                eprintln!("warning: title {:?}: {e}", title);
            }
        }
    }
    if records.is_empty() {
        return Err(runtime_err("every generation request failed"));
    }
    write_atomic(&a.out, write_jsonl(&records).as_bytes())?;
    prov.write_sidecar(&a.out)?;
    log.info(format!("wrote {} generated records to {}", records.len(), a.out.display()));
    if failed > 0 {
        return Err(runtime_err(format!("{failed} of {} generations failed", titles.len())));
    }
    Ok(())
}

fn train_lm(a: &TrainLmArgs, seed: u64, log: &Log) -> Outcome {
    check_inputs(&[&a.input])?;
    check_outputs(&[&a.lm_out, &a.embedding_out])?;
    let mut prov = Provenance::new("train-lm", seed);
    let records: Vec<LabeledRecord> = load_records(&mut prov, &a.input)?
        .into_iter()
        .filter(|r| split_matches(r, a.split) && (!a.human_only || r.label == Label::Human))
        .collect();
    if records.is_empty() {
        return Err(data_err("no records left after filtering"));
    }
    let lex = Lexicons::embedded();
    let docs: Vec<TokenizedDocument> = records
        .iter()
        .map(|r| TokenizedDocument::new(&r.title, &r.abstract_text, &lex))
        .collect();
    let config = NGramConfig {
        order: a.order,
        alpha: a.alpha,
        min_count: a.min_count,
        ..NGramConfig::default()
    };
    let lm = NGramModel::train(&docs, config).data("training language model")?;
    let words: Vec<Vec<String>> = docs
        .iter()
        .map(|d| d.sentences.iter().flat_map(|s| embedding_words(s)).collect())
        .collect();
    let emb = EmbeddingModel::build(&words);
    let emb_json = serde_json::to_string(&emb).expect("embedding serializes");

    write_atomic(&a.lm_out, prov.stamp_json(&lm.to_json(), false).as_bytes())?;
    write_atomic(&a.embedding_out, prov.stamp_json(&emb_json, false).as_bytes())?;
    log.info(format!(
        "trained {}-gram model on {} records ({} vocabulary entries, embedding over {} words)",
        lm.order(),
        records.len(),
        lm.vocab_size(),
        emb.vocab_size()
    ));
    Ok(())
}

fn featurize(a: &FeaturizeArgs, seed: u64, log: &Log) -> Outcome {
    check_inputs(&[&a.input, &a.lm, &a.embedding])?;
    check_outputs(&[&a.out])?;
    let mut prov = Provenance::new("featurize", seed);
    let records: Vec<LabeledRecord> = load_records(&mut prov, &a.input)?
        .into_iter()
        .filter(|r| split_matches(r, a.split))
        .collect();
    if records.is_empty() {
        return Err(data_err("no records left after filtering"));
    }
    let lm = load_lm(&mut prov, &a.lm)?;
    let emb = load_embedding(&mut prov, &a.embedding)?;
    let lex = Lexicons::embedded();
    let rows = FeatureExtractor::new(&lm, &emb, &lex)
        .featurize(&records)
        .data("featurizing")?;
    let mut buf = Vec::new();
    write_feature_csv(&rows, &prov.lines(), &mut buf).runtime("formatting CSV")?;
    write_atomic(&a.out, &buf)?;
    log.info(format!("wrote {} feature rows to {}", rows.len(), a.out.display()));
    Ok(())
}

fn text_ppl_column(rows: &[FeatureRow]) -> Vec<f64> {
    let j = feature_index("text_ppl").expect("text_ppl is a canonical feature");
    rows.iter().map(|r| r.features.values[j]).collect()
}

fn calibrate(a: &CalibrateArgs, seed: u64, log: &Log) -> Outcome {
    check_inputs(&[&a.input])?;
    check_outputs(&[&a.out])?;
    let mut prov = Provenance::new("calibrate-ppl", seed);
    let rows = load_rows(&mut prov, &a.input)?;
    let labels: Vec<Label> = rows.iter().map(|r| r.label).collect();
    let th = calibrate_threshold(&text_ppl_column(&rows), &labels).data("calibrating")?;
    write_atomic(&a.out, prov.stamp_serialize(&th).as_bytes())?;
    log.info(format!(
        "threshold {:.4} (calibration macro-F1 {:.4})",
        th.threshold,
        th.calibration_macro_f1.unwrap_or(f64::NAN)
    ));
    Ok(())
}

fn metrics_of(model: &LogitModel, rows: &[FeatureRow]) -> Outcome<Prf> {
    let preds = model
        .predict_batch(rows)
        .data("scoring rows")?
        .into_iter()
        .map(Label::from_probability)
        .collect::<Vec<_>>();
    let labels: Vec<Label> = rows.iter().map(|r| r.label).collect();
    Ok(prf(&confusion(&preds, &labels).data("metrics")?))
}

fn train(a: &TrainArgs, seed: u64, log: &Log) -> Outcome {
    let mut inputs = vec![a.input.as_path()];
    inputs.extend(a.test.as_deref());
    check_inputs(&inputs)?;
    if a.out_dir.exists() && !a.out_dir.is_dir() {
        return Err(data_err(format!("{} is not a directory", a.out_dir.display())));
    }
    if a.groups.is_empty() {
        return Err(data_err("--groups is empty"));
    }
    if !(a.ridge >= 0.0 && a.ridge.is_finite()) {
        return Err(data_err("--ridge must be a non-negative number"));
    }
    std::fs::create_dir_all(&a.out_dir).runtime(format!("creating {}", a.out_dir.display()))?;

    let mut prov = Provenance::new("train", seed);
    let rows = load_rows(&mut prov, &a.input)?;
    let test = a.test.as_deref().map(|p| load_rows(&mut prov, p)).transpose()?;
    let options = FitOptions {
        ridge: a.ridge,
        ..FitOptions::default()
    };
    let mut groups = a.groups.clone();
    groups.sort();
    groups.dedup();

    let mut models = Vec::new();
    let mut metrics = Vec::new();
    for group in groups {
        let model = match fit_group(&rows, group, options) {
            Ok(m) => m,
            Err(DetectorError::AllColumnsPruned) => {
                eprintln!("warning: skipping {group}: every column was pruned");
                continue;
            }
            Err(e @ (DetectorError::NoConvergence | DetectorError::SingularInformation)) => {
                return Err(e).runtime(format!("fitting {group}"));
            }
            Err(e) => return Err(e).data(format!("fitting {group}")),
        };
        let prf = metrics_of(&model, test.as_deref().unwrap_or(&rows))?;
        log.debug(format!(
            "{group}: pseudo-R2 {:.4}, macro-F1 {:.4}, {} pruned",
            model.pseudo_r2,
            prf.macro_f1,
            model.pruning.len()
        ));
        let path = a.out_dir.join(format!("model_{group}.json"));
        write_atomic(&path, prov.stamp_json(&model.to_json(), true).as_bytes())?;
        metrics.push((group.as_str().to_string(), prf));
        models.push(model);
    }
    if models.is_empty() {
        return Err(data_err("no group could be fitted"));
    }

    let report = RegressionReport::new(&models, &metrics);
    let mut text = String::new();
    for line in prov.lines() {
        let _ = writeln!(text, "# {line}");
    }
    let _ = writeln!(
        text,
        "# F1 computed on {}",
        if test.is_some() { "the held-out rows" } else { "the training rows" }
    );
    text.push_str(&report.to_text());
    write_atomic(&a.out_dir.join("report.txt"), text.as_bytes())?;
    write_atomic(
        &a.out_dir.join("report.json"),
        prov.stamp_json(&report.to_json(), true).as_bytes(),
    )?;
    log.info(format!("wrote {} models and the report to {}", models.len(), a.out_dir.display()));
    Ok(())
}

#[derive(Serialize)]
struct Metrics {
    scorer: String,
    rows: usize,
    confusion: ConfusionMatrix,
    metrics: Prf,
}

fn evaluate(a: &EvaluateArgs, seed: u64, log: &Log) -> Outcome {
    let scorer = a.model.as_deref().or(a.threshold.as_deref()).expect("clap requires one");
    check_inputs(&[scorer, &a.input])?;
    if let Some(out) = &a.out {
        check_outputs(&[out])?;
    }
    let mut prov = Provenance::new("evaluate", seed);
    let (name, preds, rows) = if let Some(path) = &a.model {
        let model = load_model(&mut prov, path)?;
        let rows = load_rows(&mut prov, &a.input)?;
        let preds: Vec<Label> = model
            .predict_batch(&rows)
            .data("scoring rows")?
            .into_iter()
            .map(Label::from_probability)
            .collect();
        (format!("logistic:{}", model.group), preds, rows)
    } else {
        let path = a.threshold.as_deref().expect("clap requires one");
        let text = prov.read_text(path)?;
        let th: PerplexityThreshold =
            serde_json::from_str(&text).data(format!("{}", path.display()))?;
        let rows = load_rows(&mut prov, &a.input)?;
        let preds = text_ppl_column(&rows).into_iter().map(|s| th.classify_score(s)).collect();
        (format!("perplexity<{}", th.threshold), preds, rows)
    };
    let labels: Vec<Label> = rows.iter().map(|r| r.label).collect();
    let cm = confusion(&preds, &labels).data("metrics")?;
    let out = Metrics {
        scorer: name,
        rows: rows.len(),
        confusion: cm,
        metrics: prf(&cm),
    };
    let json = prov.stamp_serialize(&out);
    match &a.out {
        Some(path) => {
            write_atomic(path, json.as_bytes())?;
            log.info(classification_table(&out.metrics).trim_end());
        }
        None => print!("{json}"),
    }
    Ok(())
}

struct Scoring {
    model: LogitModel,
    lm: NGramModel,
    emb: EmbeddingModel,
    lex: Lexicons,
    title: String,
    body: String,
}

/// Loads the detector, language model, embedding and text shared by
/// `detect` and `explain`.
fn load_scoring(t: &TextArgs, prov: &mut Provenance) -> Outcome<Scoring> {
    let from_file = t.input.as_deref().filter(|p| *p != Path::new("-"));
    let mut inputs = vec![t.model.as_path(), t.lm.as_path(), t.embedding.as_path()];
    inputs.extend(from_file);
    check_inputs(&inputs)?;
    let model = load_model(prov, &t.model)?;
    let lm = load_lm(prov, &t.lm)?;
    let emb = load_embedding(prov, &t.embedding)?;
    let body = match from_file {
        Some(p) => prov.read_text(p)?,
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).data("reading standard input")?;
            prov.record_bytes("<stdin>", s.as_bytes());
            s
        }
    };
    let body = collapse_whitespace(&body);
    if body.is_empty() {
        return Err(data_err("the abstract text is empty"));
    }
    Ok(Scoring {
        model,
        lm,
        emb,
        lex: Lexicons::embedded(),
        title: collapse_whitespace(&t.title),
        body,
    })
}

fn label_name(label: Label) -> &'static str {
    match label {
        Label::Ai => "AI-generated",
        Label::Human => "human-written",
    }
}

fn detect(a: &DetectArgs, seed: u64) -> Outcome {
    let mut prov = Provenance::new("detect", seed);
    let s = load_scoring(&a.text, &mut prov)?;
    let extractor = FeatureExtractor::new(&s.lm, &s.emb, &s.lex);
    let features = extractor.extract(&s.title, &s.body).data("featurizing the text")?;
    let p = s.model.predict_proba(&features).data("scoring")?;
    let label = Label::from_probability(p);
    let contributions = s.model.contributions(&features).data("scoring")?;

    let mut out = String::new();
    let _ = writeln!(out, "label: {} ({})", label.as_u8(), label_name(label));
    let _ = writeln!(out, "p_human: {p:.6}");
    let _ = writeln!(out, "model: {}", s.model.group);
    if let Some(ppl) = features.get("text_ppl") {
        let _ = writeln!(out, "text_ppl: {ppl:.4}");
    }
    let _ = writeln!(
        out,
        "{:<20}{:>14}{:>14}{:>14}",
        "feature", "value", "standardized", "contribution"
    );
    for c in contributions.iter().take(a.top) {
        let _ = writeln!(
            out,
            "{:<20}{:>14.4}{:>14.4}{:>+14.4}",
            c.feature, c.value, c.standardized, c.contribution
        );
    }
    print!("{out}");
    Ok(())
}

fn attribution_table(e: &Explanation) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "label: {} ({}), p_human {:.6}",
        e.predicted_label.as_u8(),
        label_name(e.predicted_label),
        e.predicted_prob
    );
    let _ = writeln!(out, "{:<24}{:>12}", "word", "weight");
    for at in &e.attributions {
        let sign = if at.weight > 0.0 {
            "+ human"
        } else if at.weight < 0.0 {
            "- AI"
        } else {
            ""
        };
        let _ = writeln!(out, "{:<24}{:>+12.6}  {sign}", at.word, at.weight);
    }
    out
}

fn explain(a: &ExplainArgs, seed: u64, log: &Log) -> Outcome {
    if let Some(out) = &a.out {
        check_outputs(&[out])?;
    }
    let mut prov = Provenance::new("explain", seed);
    let s = load_scoring(&a.text, &mut prov)?;
    let extractor = FeatureExtractor::new(&s.lm, &s.emb, &s.lex);
    let doc = extractor.document(&s.title, &s.body);
    // masked texts that lose every word fall back to the intercept-only prediction
    let baseline = 1.0 / (1.0 + (-s.model.intercept).exp());
    let predict = |text: &str| {
        extractor
            .extract(&s.title, text)
            .ok()
            .and_then(|f| s.model.predict_proba(&f).ok())
            .unwrap_or(baseline)
    };
    let config = ExplainConfig {
        n_samples: a.samples,
        top_k: a.top_k,
        seed,
        exhaustive: !a.no_exhaustive,
    };
    log.debug(format!("explaining {} words", doc.word_count()));
    let explanation = explain_prediction(predict, &doc, config).data("explaining")?;
    if let Some(path) = &a.out {
        write_atomic(path, prov.stamp_serialize(&explanation).as_bytes())?;
    }
    print!("{}", attribution_table(&explanation));
    if explanation.degenerate {
        log.info("warning: the model's output did not vary under masking");
    }
    Ok(())
}
