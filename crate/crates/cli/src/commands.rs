use std::collections::BTreeSet;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{ArgMatches, CommandFactory};
use rayon::prelude::*;
use subseg_core::analysis::{
    consistency_report, emit_consistency_tsv, emit_sweep_tsv, oov_report, segment_types,
    ConsistencyConfig, SegmentedSide, Sweep as SweepRun, SweepOp,
};
use subseg_core::bpe::{bpe_train, ApplyMode, BpeModel, BpeVocab, MergeTable};
use subseg_core::charseg::{char_desegment, char_segment, CharSegConfig};
use subseg_core::io::{Line, LineReader, SegmentedLineCodec};
use subseg_core::normalize::{normalize_text, separate_punctuation, NormalizationConfig};
use subseg_core::pospipe::{gen_instances, load_tagged, write_seq2seq, PosSegmenter};
use subseg_core::{load_corpus, Corpus, Error, Reserved, Sentence, Word};

use crate::args::*;
use crate::manifest::{self, Manifest};
use crate::{CliError, CliResult, Context};

const BATCH_LINES: usize = 4096;

struct Env<'a> {
    reserved: Reserved,
    manifest: Manifest,
    explicit_manifest: Option<&'a Path>,
}

impl Env<'_> {
    fn finish(&self, output: Option<&Path>) -> CliResult<()> {
        if let Some(p) = manifest::default_path(self.explicit_manifest, output) {
            self.manifest.write(&p)?;
        }
        Ok(())
    }
}

pub fn dispatch(cli: Cli, matches: &ArgMatches) -> CliResult<()> {
    let reserved = Reserved {
        boundary: cli.global.boundary.clone(),
        unk: cli.global.unk.clone(),
        marker: cli.global.marker.clone(),
    };
    reserved.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let (sub, sub_m) = matches.subcommand().expect("subcommand is required");
    let env = Env {
        reserved,
        manifest: Manifest::from_matches(&mut Cli::command(), sub, sub_m),
        explicit_manifest: cli.global.manifest.as_deref(),
    };
    match cli.command {
        Command::TrainBpe(a) => train_bpe(&env, a),
        Command::ApplyBpe(a) => apply_bpe(&env, a),
        Command::SegmentChars(a) => segment_chars(&env, a),
        Command::Desegment(a) => desegment(&env, a),
        Command::Normalize(a) => normalize(&env, a),
        Command::Stats(a) => stats(&env, a),
        Command::Sweep(a) => sweep(&env, a),
        Command::Oov(a) => oov(&env, a),
        Command::Consistency(a) => consistency(&env, a),
        Command::PosPrep(a) => pos_prep(&env, a),
        Command::Replay(a) => {
            let text = std::fs::read_to_string(&a.from).ctx(a.from.display())?;
            crate::execute(manifest::argv_from(&text)?)
        }
    }
}

fn name_of(path: Option<&Path>) -> String {
    match path {
        Some(p) if p != Path::new("-") => p.display().to_string(),
        _ => "<stdin>".to_string(),
    }
}

fn open_input(path: Option<&Path>) -> CliResult<Box<dyn BufRead>> {
    match path {
        Some(p) if p != Path::new("-") => {
            let f = File::open(p).ctx(p.display())?;
            Ok(Box::new(BufReader::with_capacity(1 << 16, f)))
        }
        _ => Ok(Box::new(io::stdin().lock())),
    }
}

fn create_output(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    match path {
        Some(p) if p != Path::new("-") => {
            let f = File::create(p).ctx(p.display())?;
            Ok(Box::new(BufWriter::with_capacity(1 << 16, f)))
        }
        _ => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

fn out_name(path: Option<&Path>) -> String {
    match path {
        Some(p) if p != Path::new("-") => p.display().to_string(),
        _ => "<stdout>".to_string(),
    }
}

fn file_output(path: &Option<PathBuf>) -> Option<&Path> {
    path.as_deref().filter(|p| *p != Path::new("-"))
}

fn load(path: Option<&Path>, reserved: &Reserved) -> CliResult<Corpus> {
    load_corpus(open_input(path)?, reserved).ctx(name_of(path))
}

fn read_merges(path: &Path) -> CliResult<MergeTable> {
    MergeTable::read(open_input(Some(path))?).ctx(path.display())
}

/// Streams `input` in fixed-size batches, transforming lines in parallel and
/// writing results in input order.
fn stream_lines<T, F>(
    input: Option<&Path>,
    output: Option<&Path>,
    transform: F,
    mut on_result: impl FnMut(&T),
) -> CliResult<()>
where
    T: Send,
    F: Fn(&Line) -> CliResult<(String, T)> + Sync,
{
    let in_name = name_of(input);
    let o_name = out_name(output);
    let mut out = create_output(output)?;
    let mut batch: Vec<Line> = Vec::with_capacity(BATCH_LINES);
    let mut flush = |batch: &mut Vec<Line>, out: &mut Box<dyn Write>| -> CliResult<()> {
        let results: Vec<CliResult<(String, T)>> = batch.par_iter().map(&transform).collect();
        for r in results {
            let (text, extra) = r?;
            on_result(&extra);
            out.write_all(text.as_bytes()).ctx(&o_name)?;
            out.write_all(b"\n").ctx(&o_name)?;
        }
        batch.clear();
        Ok(())
    };
    for line in LineReader::new(open_input(input)?) {
        batch.push(line.ctx(&in_name)?);
        if batch.len() == BATCH_LINES {
            flush(&mut batch, &mut out)?;
        }
    }
    flush(&mut batch, &mut out)?;
    out.flush().ctx(&o_name)
}

fn train_bpe(env: &Env, a: TrainBpe) -> CliResult<()> {
    let corpus = load(a.input.as_deref(), &env.reserved)?;
    let table = bpe_train(&corpus, a.op).ctx(name_of(a.input.as_deref()))?;
    if table.op() < a.op {
        eprintln!(
            "subseg: learned {} merge operations (requested {}); no pair occurs twice",
            table.op(),
            a.op
        );
    }
    let mut out = create_output(a.output.as_deref())?;
    out.write_all(table.write().as_bytes())
        .and_then(|_| out.flush())
        .ctx(out_name(a.output.as_deref()))?;
    env.finish(file_output(&a.output))
}

fn apply_bpe(env: &Env, a: ApplyBpe) -> CliResult<()> {
    let table = read_merges(&a.merges)?;
    let k = a.k.unwrap_or(table.op());
    let model = BpeModel::new(&table);
    let segmenter = model.segmenter(k).ctx(a.merges.display())?;
    let vocab = match &a.vocab {
        Some(p) => Some(read_vocab(p, &env.reserved)?),
        None => None,
    };
    let mode = match &vocab {
        Some(v) => ApplyMode::Constrained {
            vocab: v,
            unk: &env.reserved.unk,
        },
        None => ApplyMode::Unconstrained,
    };
    let codec = SegmentedLineCodec::new(&env.reserved).expect("validated");
    let in_name = name_of(a.input.as_deref());
    let mut unk_count = 0u64;
    stream_lines(
        a.input.as_deref(),
        a.output.as_deref(),
        |line| {
            let sentence = Sentence::parse(&line.text);
            env.reserved.check_sentence(line.number, &sentence).ctx(&in_name)?;
            let row: Vec<_> = sentence.words.iter().map(|w| segmenter.segment_with(w, mode)).collect();
            let unks = row.iter().filter(|w| w.is_unk()).count() as u64;
            let mut text = String::new();
            codec.format_row(&row, &mut text);
            Ok((text, unks))
        },
        |n| unk_count += n,
    )?;
    if vocab.is_some() {
        eprintln!("subseg: unk_count={unk_count}");
    }
    env.finish(file_output(&a.output))
}

/// Word types of a corpus file, read line by line.
fn read_vocab(path: &Path, reserved: &Reserved) -> CliResult<BpeVocab> {
    let mut words: BTreeSet<Word> = BTreeSet::new();
    for line in LineReader::new(open_input(Some(path))?) {
        let line = line.ctx(path.display())?;
        let s = Sentence::parse(&line.text);
        reserved.check_sentence(line.number, &s).ctx(path.display())?;
        words.extend(s.words);
    }
    Ok(BpeVocab::from_words(words))
}

fn segment_chars(env: &Env, a: SegmentChars) -> CliResult<()> {
    let cfg = CharSegConfig::new(&env.reserved.boundary, a.max_units)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let in_name = name_of(a.input.as_deref());
    stream_lines(
        a.input.as_deref(),
        a.output.as_deref(),
        |line| {
            let sentence = Sentence::parse(&line.text);
            env.reserved.check_sentence(line.number, &sentence).ctx(&in_name)?;
            let seg = char_segment(&sentence, &cfg).ctx(format!("{in_name}:{}", line.number))?;
            let warning = seg.exceeds_limit.then(|| {
                format!(
                    "subseg: warning: {in_name}:{}: {} units exceeds limit {}",
                    line.number,
                    seg.units.len(),
                    cfg.max_sentence_units()
                )
            });
            let text = seg.units.iter().map(|u| u.as_str()).collect::<Vec<_>>().join(" ");
            Ok((text, warning))
        },
        |w| {
            if let Some(w) = w {
                eprintln!("{w}");
            }
        },
    )?;
    env.finish(file_output(&a.output))
}

fn desegment(env: &Env, a: Desegment) -> CliResult<()> {
    let codec = SegmentedLineCodec::new(&env.reserved).expect("validated");
    let cfg = CharSegConfig::new(&env.reserved.boundary, usize::MAX).expect("validated");
    let in_name = name_of(a.input.as_deref());
    stream_lines(
        a.input.as_deref(),
        a.output.as_deref(),
        |line| {
            let text = match a.scheme {
                DesegmentScheme::Bpe => {
                    let row = codec.parse_line(line.number, &line.text).ctx(&in_name)?;
                    let mut words = Vec::with_capacity(row.len());
                    for (i, w) in row.iter().enumerate() {
                        if w.is_unk() {
                            return Err(Error::UnkInOutput {
                                sentence: line.number,
                                word: i + 1,
                            })
                            .ctx(&in_name);
                        }
                        words.push(w.surface());
                    }
                    words.join(" ")
                }
                DesegmentScheme::Char => {
                    let units = codec.parse_char_line(&line.text);
                    char_desegment(&units, &cfg)
                        .ctx(format!("{in_name}:{}", line.number))?
                        .to_line()
                }
            };
            Ok((text, ()))
        },
        |_| {},
    )?;
    env.finish(file_output(&a.output))
}

fn normalize(env: &Env, a: Normalize) -> CliResult<()> {
    let cfg = if a.no_normalize {
        NormalizationConfig::disabled()
    } else if let Some(p) = &a.rules {
        let text = std::fs::read_to_string(p).ctx(p.display())?;
        NormalizationConfig::parse_rules(&text).ctx(p.display())?
    } else {
        NormalizationConfig::arabic_default()
    };
    stream_lines(
        a.input.as_deref(),
        a.output.as_deref(),
        |line| {
            let text = normalize_text(&line.text, &cfg);
            let sentence = if a.no_punct {
                Sentence::parse(&text)
            } else {
                separate_punctuation(&text)
            };
            Ok((sentence.to_line(), ()))
        },
        |_| {},
    )?;
    env.finish(file_output(&a.output))
}

fn stats(env: &Env, a: Stats) -> CliResult<()> {
    let s = load(a.input.as_deref(), &env.reserved)?.stats();
    let text = format!(
        "tokens={}\ntypes={}\nsentences={}\nmean_word_len_chars={:.4}\n",
        s.tokens,
        s.types,
        s.sentences,
        s.mean_word_len_chars()
    );
    write_all(a.output.as_deref(), &text)?;
    env.finish(file_output(&a.output))
}

fn write_all(path: Option<&Path>, text: &str) -> CliResult<()> {
    let mut out = create_output(path)?;
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .ctx(out_name(path))
}

fn sweep(env: &Env, a: Sweep) -> CliResult<()> {
    let src = load(Some(&a.src), &env.reserved)?;
    let tgt = load(Some(&a.tgt), &env.reserved)?;
    let table = read_merges(&a.merges)?;
    let other = match &a.other_merges {
        Some(p) => Some(read_merges(p)?),
        None => None,
    };
    let run = SweepRun {
        src: &src,
        tgt: &tgt,
        table: &table,
        side: if a.segment_target {
            SegmentedSide::Target
        } else {
            SegmentedSide::Source
        },
        fixed: other.as_ref().map(|t| (t, a.other_k.unwrap_or(SweepOp::Saturated))),
    };
    let points = run.run(&a.ops).ctx(a.merges.display())?;
    write_all(a.output.as_deref(), &emit_sweep_tsv(&points))?;
    env.finish(file_output(&a.output))
}

fn oov(env: &Env, a: Oov) -> CliResult<()> {
    let vocab = read_vocab(&a.train, &env.reserved)?;
    let test = load(Some(&a.test), &env.reserved)?;
    let r = oov_report(&vocab, &test, a.top_n);
    let mut text = format!(
        "oov_types={}\noov_tokens={}\ntest_types={}\ntest_tokens={}\n\nword\tcount\n",
        r.oov_types,
        r.oov_tokens,
        test.type_counts().len(),
        test.token_count()
    );
    for (w, n) in &r.examples {
        text.push_str(&format!("{w}\t{n}\n"));
    }
    write_all(a.output.as_deref(), &text)?;
    env.finish(file_output(&a.output))
}

fn consistency(env: &Env, a: Consistency) -> CliResult<()> {
    let corpus = load(a.input.as_deref(), &env.reserved)?;
    let table = read_merges(&a.merges)?;
    let model = BpeModel::new(&table);
    let seg = model.segmenter(a.k.unwrap_or(table.op())).ctx(a.merges.display())?;
    let types = segment_types(&corpus, &seg);
    let cfg = ConsistencyConfig {
        min_lcp: a.min_lcp,
        top_n: a.top_n,
    };
    let pairs = consistency_report(&types, cfg).map_err(|e| CliError::Usage(e.to_string()))?;
    write_all(a.output.as_deref(), &emit_consistency_tsv(&pairs))?;
    env.finish(file_output(&a.output))
}

fn pos_prep(env: &Env, a: PosPrep) -> CliResult<()> {
    let in_name = name_of(a.input.as_deref());
    let corpus = load_tagged(open_input(a.input.as_deref())?).ctx(&in_name)?;
    if a.merges.is_some() && a.scheme != PosScheme::Bpe {
        return Err(CliError::Usage("--merges is only valid with --scheme bpe".into()));
    }
    if a.morph.is_some() && a.scheme != PosScheme::Morph {
        return Err(CliError::Usage("--morph is only valid with --scheme morph".into()));
    }
    let table;
    let model;
    let bpe_seg;
    let morph_rows;
    let segmenter = match a.scheme {
        PosScheme::Unseg => PosSegmenter::Unseg,
        PosScheme::Char => PosSegmenter::Char,
        PosScheme::Bpe => {
            let path = a
                .merges
                .as_ref()
                .ok_or_else(|| CliError::Usage("--scheme bpe requires --merges".into()))?;
            table = read_merges(path)?;
            model = BpeModel::new(&table);
            bpe_seg = model.segmenter(a.k.unwrap_or(table.op())).ctx(path.display())?;
            PosSegmenter::Bpe(&bpe_seg)
        }
        PosScheme::Morph => {
            let path = a
                .morph
                .as_ref()
                .ok_or_else(|| CliError::Usage("--scheme morph requires --morph".into()))?;
            let codec = SegmentedLineCodec::new(&env.reserved).expect("validated");
            let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            morph_rows = codec.read_imported(open_input(Some(path))?, &name).ctx(path.display())?;
            PosSegmenter::Imported {
                scheme: morph_rows.0.clone(),
                rows: &morph_rows.1,
            }
        }
    };
    let instances = gen_instances(&corpus, &segmenter).ctx(&in_name)?;

    let with_suffix = |suffix: &str| {
        let mut s = a.output_prefix.as_os_str().to_owned();
        s.push(suffix);
        PathBuf::from(s)
    };
    let (src_path, tgt_path) = (with_suffix(".src"), with_suffix(".tgt"));
    let mut src = create_output(Some(&src_path))?;
    let mut tgt = create_output(Some(&tgt_path))?;
    write_seq2seq(&instances, &env.reserved.marker, &mut src, &mut tgt).ctx(src_path.display())?;
    src.flush().ctx(src_path.display())?;
    tgt.flush().ctx(tgt_path.display())?;
    env.finish(Some(&a.output_prefix))
}
