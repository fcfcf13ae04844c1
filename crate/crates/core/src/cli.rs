//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or i/o error, 3 embedder or
//! transport error. Every failure prints one diagnostic line to stderr.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::chunker::{chunk_tokens, default_retrieval_stride, ChunkSpec};
use crate::codec::{decode, encode, encode_for_model, Mode, DEFAULT_MAX_LEN};
use crate::pretokenizer::{normalize, split_units, UnitKind};
use crate::retrieval::{
    evaluate_sweep, Backend, EvalDataset, EvalOptions, EvalResult, RemoteEmbedder, RetrievalError,
};
use crate::retrieval::{EmbedError, SweepError};
use crate::stats::DensityCounts;
use crate::syllabifier::syllable_spans;
use crate::vocab::{TokenCounts, TokenId, Vocab};

const LINE_BLOCK: usize = 8192;

#[derive(Debug, Parser)]
#[command(name = "hece", version, about = "Syllable tokenizer for Turkish")]
struct Cli {
    /// Worker threads for parallel stages (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Print progress to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print each input line as hyphenated syllables.
    Syllabify(IoArgs),
    /// Build a vocabulary from a corpus with one document per line.
    BuildVocab {
        #[arg(long)]
        corpus: PathBuf,
        /// Output file (default: stdout).
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Encode text lines to `{"ids": [...]}` records.
    Encode {
        #[arg(long)]
        vocab: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Flat)]
        mode: ModeArg,
        /// Wrap in [CLS] ... [SEP] and truncate to --max-len.
        #[arg(long)]
        model: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_LEN)]
        max_len: usize,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Decode `{"ids": [...]}` records back to text lines.
    Decode {
        #[arg(long)]
        vocab: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Flat)]
        mode: ModeArg,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Print token density statistics for a corpus.
    Stats {
        #[arg(long)]
        corpus: PathBuf,
    },
    /// Cut passages into overlapping token windows.
    Chunk {
        #[arg(long)]
        vocab: PathBuf,
        #[arg(long)]
        size: usize,
        /// Window step (default: size / 2).
        #[arg(long)]
        stride: Option<usize>,
        /// Chunk the passages of an evaluation dataset instead of input lines.
        #[arg(long)]
        dataset: Option<PathBuf>,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Recall@k sweep over chunk sizes.
    Eval(EvalArgs),
}

#[derive(Debug, Args)]
struct IoArgs {
    /// Input file (default: stdin).
    #[arg(long, short)]
    input: Option<PathBuf>,
    /// Output file (default: stdout).
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long)]
    vocab: PathBuf,
    #[arg(long, value_enum, default_value_t = EmbedderArg::Tfidf)]
    embedder: EmbedderArg,
    /// Base URL of the embedding service.
    #[arg(long, required_if_eq("embedder", "remote"))]
    endpoint: Option<String>,
    /// Request path on the embedding service.
    #[arg(long, default_value = "/embed")]
    path: String,
    /// Embedding dimension returned by the service.
    #[arg(long, required_if_eq("embedder", "remote"))]
    dim: Option<usize>,
    #[arg(long, default_value_t = 32)]
    batch_size: usize,
    #[arg(long, default_value_t = 4)]
    max_in_flight: usize,
    #[arg(long, default_value_t = 60)]
    timeout_secs: u64,
    #[arg(long, default_value_t = 5)]
    k: usize,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "4,6,8,12,16,32,64,128,512"
    )]
    chunk_sizes: Vec<usize>,
    /// Window step for every size (default: size / 2).
    #[arg(long)]
    stride: Option<usize>,
    /// Count the top k distinct passages rather than the top k chunks.
    #[arg(long)]
    dedup_passages: bool,
    #[arg(long, value_enum, default_value_t = FormatArg::Table)]
    format: FormatArg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Flat,
    Lossless,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Flat => Mode::Flat,
            ModeArg::Lossless => Mode::Lossless,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EmbedderArg {
    Tfidf,
    Remote,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Table,
    Jsonl,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
    Embedder(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Embedder(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Embedder(m) => m,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Data(format!("i/o error: {e}"))
    }
}

fn data_err(context: impl std::fmt::Display, e: impl std::fmt::Display) -> CliError {
    CliError::Data(format!("{context}: {e}"))
}

/// One record of `encode` output and `decode` input.
#[derive(Debug, Serialize, Deserialize)]
struct IdsRecord {
    ids: Vec<TokenId>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum IdsLine {
    Record(IdsRecord),
    Bare(Vec<TokenId>),
}

#[derive(Debug, Serialize)]
struct ChunkRecord<'a> {
    passage_id: &'a str,
    start: usize,
    ids: &'a [TokenId],
}

/// Runs the CLI on the process's stdio and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdin = io::stdin();
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with_io(
        args,
        &mut stdin.lock(),
        &mut stdout.lock(),
        &mut stderr.lock(),
    )
}

/// Same as [`run`] with explicit streams; stdin/stdout are used when no
/// `--input`/`--output` is given.
pub fn run_with_io<I, T>(
    args: I,
    stdin: &mut dyn BufRead,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let err = CliError::Usage(one_line(&e.to_string()));
            let _ = writeln!(stderr, "{}", err.message());
            return err.exit_code();
        }
    };

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            let _ = writeln!(stderr, "error: --threads must be at least 1");
            return 1;
        }
        pool = pool.num_threads(n);
    }
    let result = match pool.build() {
        Ok(pool) => dispatch(&cli, &pool, stdin, stdout, stderr),
        Err(e) => Err(CliError::Data(format!("cannot start thread pool: {e}"))),
    };
    match result.and_then(|()| stdout.flush().map_err(CliError::from)) {
        Ok(()) => 0,
        Err(err) => {
            let _ = writeln!(stderr, "error: {}", err.message());
            err.exit_code()
        }
    }
}

/// Collapses clap's multi-line message into one line.
fn one_line(message: &str) -> String {
    message
        .lines()
        .map(str::trim)
        .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more information"))
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

fn open_input<'a>(
    path: &Option<PathBuf>,
    stdin: &'a mut dyn BufRead,
) -> Result<Box<dyn BufRead + 'a>, CliError> {
    match path {
        Some(p) => Ok(Box::new(BufReader::new(
            File::open(p).map_err(|e| data_err(p.display(), e))?,
        ))),
        None => Ok(Box::new(stdin)),
    }
}

fn open_output<'a>(
    path: &Option<PathBuf>,
    stdout: &'a mut dyn Write,
) -> Result<Box<dyn Write + 'a>, CliError> {
    match path {
        Some(p) => Ok(Box::new(BufWriter::new(
            File::create(p).map_err(|e| data_err(p.display(), e))?,
        ))),
        None => Ok(Box::new(stdout)),
    }
}

fn load_vocab(path: &Path) -> Result<Vocab, CliError> {
    Vocab::load(path).map_err(|e| data_err(path.display(), e))
}

fn open_corpus(path: &Path) -> Result<BufReader<File>, CliError> {
    Ok(BufReader::new(
        File::open(path).map_err(|e| data_err(path.display(), e))?,
    ))
}

/// Feeds lines to `f` in blocks so large files stream in bounded memory.
fn for_each_block(reader: impl BufRead, mut f: impl FnMut(&[String])) -> Result<(), CliError> {
    let mut block = Vec::with_capacity(LINE_BLOCK);
    for line in reader.lines() {
        block.push(line?);
        if block.len() == LINE_BLOCK {
            f(&block);
            block.clear();
        }
    }
    if !block.is_empty() {
        f(&block);
    }
    Ok(())
}

/// Units of a line, words shown as hyphenated syllables, joined by spaces.
pub fn format_syllables(line: &str) -> String {
    let normalized = normalize(line);
    split_units(&normalized)
        .iter()
        .map(|unit| match unit.kind {
            UnitKind::Word => syllable_spans(&unit.text)
                .expect("word units contain only letters")
                .into_iter()
                .map(|(range, _)| &unit.text[range])
                .collect::<Vec<_>>()
                .join("-"),
            _ => unit.text.clone(),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn dispatch(
    cli: &Cli,
    pool: &rayon::ThreadPool,
    stdin: &mut dyn BufRead,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    match &cli.command {
        Command::Syllabify(io) => {
            let input = open_input(&io.input, stdin)?;
            let mut out = open_output(&io.output, stdout)?;
            for line in input.lines() {
                writeln!(out, "{}", format_syllables(&line?))?;
            }
            out.flush()?;
        }
        Command::BuildVocab { corpus, output } => {
            use rayon::prelude::*;
            let mut counts = TokenCounts::new();
            let mut lines = 0usize;
            for_each_block(open_corpus(corpus)?, |block| {
                lines += block.len();
                let part = pool.install(|| {
                    block
                        .par_iter()
                        .fold(TokenCounts::new, |mut c, doc| {
                            c.add_document(doc);
                            c
                        })
                        .reduce(TokenCounts::new, |mut a, b| {
                            a.merge(b);
                            a
                        })
                });
                counts.merge(part);
            })?;
            let vocab = counts
                .into_vocab()
                .map_err(|e| data_err(corpus.display(), e))?;
            if cli.verbose {
                writeln!(stderr, "{lines} documents, {} ids", vocab.len())?;
            }
            let mut out = open_output(output, stdout)?;
            vocab
                .write_json(&mut out)
                .map_err(|e| data_err("writing vocabulary", e))?;
            writeln!(out)?;
            out.flush()?;
        }
        Command::Encode {
            vocab,
            mode,
            model,
            max_len,
            io,
        } => {
            let vocab = load_vocab(vocab)?;
            let input = open_input(&io.input, stdin)?;
            let mut out = open_output(&io.output, stdout)?;
            for line in input.lines() {
                let line = line?;
                let ids = if *model {
                    encode_for_model(&line, &vocab, *max_len).ids
                } else {
                    encode(&line, &vocab, (*mode).into()).ids
                };
                serde_json::to_writer(&mut out, &IdsRecord { ids }).map_err(io::Error::from)?;
                writeln!(out)?;
            }
            out.flush()?;
        }
        Command::Decode { vocab, mode, io } => {
            let vocab = load_vocab(vocab)?;
            let input = open_input(&io.input, stdin)?;
            let mut out = open_output(&io.output, stdout)?;
            for (n, line) in input.lines().enumerate() {
                let line = line?;
                let ids = match serde_json::from_str::<IdsLine>(&line)
                    .map_err(|e| data_err(format!("line {}", n + 1), e))?
                {
                    IdsLine::Record(r) => r.ids,
                    IdsLine::Bare(ids) => ids,
                };
                let text = decode(&ids, &vocab, (*mode).into())
                    .map_err(|e| data_err(format!("line {}", n + 1), e))?;
                writeln!(out, "{text}")?;
            }
            out.flush()?;
        }
        Command::Stats { corpus } => {
            use rayon::prelude::*;
            let mut counts = DensityCounts::default();
            for_each_block(open_corpus(corpus)?, |block| {
                let part = pool.install(|| {
                    block
                        .par_iter()
                        .fold(DensityCounts::default, |mut c, doc| {
                            c.add_document(doc);
                            c
                        })
                        .reduce(DensityCounts::default, |mut a, b| {
                            a.merge(b);
                            a
                        })
                });
                counts.merge(part);
            })?;
            let stats = counts.finish().map_err(|e| data_err(corpus.display(), e))?;
            serde_json::to_writer_pretty(&mut *stdout, &stats).map_err(io::Error::from)?;
            writeln!(stdout)?;
        }
        Command::Chunk {
            vocab,
            size,
            stride,
            dataset,
            io,
        } => {
            let vocab = load_vocab(vocab)?;
            let stride = stride.unwrap_or_else(|| default_retrieval_stride(*size));
            let spec = ChunkSpec::new(*size, stride).map_err(|e| CliError::Usage(e.to_string()))?;
            let mut out = open_output(&io.output, stdout)?;
            let mut emit = |passage_id: &str, text: &str| -> Result<(), CliError> {
                let ids = encode(text, &vocab, Mode::Flat).ids;
                for chunk in chunk_tokens(passage_id, &ids, spec) {
                    let record = ChunkRecord {
                        passage_id: &chunk.passage_id,
                        start: chunk.start,
                        ids: &chunk.ids,
                    };
                    serde_json::to_writer(&mut out, &record).map_err(io::Error::from)?;
                    writeln!(out)?;
                }
                Ok(())
            };
            match dataset {
                Some(path) => {
                    let ds = EvalDataset::load(path).map_err(|e| data_err(path.display(), e))?;
                    for p in ds.passages() {
                        emit(&p.id, &p.text)?;
                    }
                }
                None => {
                    let input = open_input(&io.input, stdin)?;
                    for (n, line) in input.lines().enumerate() {
                        emit(&n.to_string(), &line?)?;
                    }
                }
            }
            out.flush()?;
        }
        Command::Eval(args) => run_eval(args, pool, cli.verbose, stdout, stderr)?,
    }
    Ok(())
}

fn run_eval(
    args: &EvalArgs,
    pool: &rayon::ThreadPool,
    verbose: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    if args.k == 0 {
        return Err(CliError::Usage("--k must be at least 1".into()));
    }
    if args.chunk_sizes.is_empty() {
        return Err(CliError::Usage("--chunk-sizes must not be empty".into()));
    }
    for &size in &args.chunk_sizes {
        let stride = args
            .stride
            .unwrap_or_else(|| default_retrieval_stride(size));
        ChunkSpec::new(size, stride).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let dataset =
        EvalDataset::load(&args.dataset).map_err(|e| data_err(args.dataset.display(), e))?;
    let vocab = load_vocab(&args.vocab)?;

    let remote;
    let backend = match args.embedder {
        EmbedderArg::Tfidf => Backend::TfIdf,
        EmbedderArg::Remote => {
            let endpoint = args.endpoint.as_ref().ok_or_else(|| {
                CliError::Usage("--endpoint is required for the remote embedder".into())
            })?;
            let dim = args.dim.ok_or_else(|| {
                CliError::Usage("--dim is required for the remote embedder".into())
            })?;
            remote = RemoteEmbedder::builder(endpoint.clone(), dim)
                .path(args.path.clone())
                .batch_size(args.batch_size)
                .max_in_flight(args.max_in_flight)
                .timeout(Duration::from_secs(args.timeout_secs))
                .build();
            Backend::Remote(&remote)
        }
    };
    let options = EvalOptions {
        k: args.k,
        dedup_passages: args.dedup_passages,
    };

    let mut results: Vec<EvalResult> = Vec::with_capacity(args.chunk_sizes.len());
    for &size in &args.chunk_sizes {
        let started = std::time::Instant::now();
        let mut r = pool
            .install(|| evaluate_sweep(&dataset, &vocab, &[size], args.stride, &backend, options))
            .map_err(|e| match e {
                SweepError::Retrieval(RetrievalError::Embed(e)) => embed_err(e),
                SweepError::Spec(e) => CliError::Usage(e.to_string()),
                SweepError::Retrieval(e) => CliError::Data(e.to_string()),
            })?;
        if verbose {
            writeln!(stderr, "chunk size {size}: {:.2?}", started.elapsed())?;
        }
        results.append(&mut r);
    }

    match args.format {
        FormatArg::Table => {
            writeln!(stdout, "chunk_size\tstride\tchunks\trecall@{}", args.k)?;
            for r in &results {
                writeln!(
                    stdout,
                    "{}\t{}\t{}\t{:.4}",
                    r.chunk_size, r.stride, r.num_chunks, r.recall_at_k
                )?;
            }
        }
        FormatArg::Jsonl => {
            for r in &results {
                serde_json::to_writer(&mut *stdout, r).map_err(io::Error::from)?;
                writeln!(stdout)?;
            }
        }
    }
    Ok(())
}

fn embed_err(e: EmbedError) -> CliError {
    CliError::Embedder(format!("embedder: {e}"))
}
