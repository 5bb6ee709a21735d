use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use huecodec::core::codec::{decode_hdr, decode_ldr_bytes, encode, TwoLayerStream};
use huecodec::core::metrics::{delta_c, delta_h, psnr, tmqi};
use huecodec::core::{tmo, HdrImage, LdrImage, Operator, TmoParams};
use huecodec::hdr_io::{read_hdr_file, read_ldr_file, write_pfm, write_ppm};
use huecodec::report::{read_manifest, run_report, write_tables, ReportConfig, TABLE1_METRICS};
use huecodec::corpus;

#[derive(Parser)]
#[command(name = "huecodec", version, about = "Two-layer HDR coding with hue compensation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tone-map an HDR image to a display-referred PPM or PFM.
    Tonemap {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        tmo: TmoArgs,
        /// `.ppm` (8-bit) or `.pfm` (float) output.
        #[arg(long)]
        output: PathBuf,
    },
    /// Encode an HDR image into a two-layer HXT1 stream.
    Encode {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 80, value_parser = clap::value_parser!(u8).range(1..=100))]
        quality: u8,
        #[command(flatten)]
        tmo: TmoArgs,
        /// Apply hue compensation to the base layer.
        #[arg(long)]
        compensate: bool,
        #[arg(long)]
        output: PathBuf,
    },
    /// Decode one layer of an HXT1 stream.
    Decode {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Layer::Ldr)]
        layer: Layer,
        /// PPM for `ldr`, PFM for `hdr`.
        #[arg(long)]
        output: PathBuf,
    },
    /// Score an LDR image against its HDR original. Prints `metric,value`
    /// CSV on stdout and a readable summary on stderr.
    Metrics {
        #[arg(long)]
        ldr: PathBuf,
        #[arg(long)]
        hdr: PathBuf,
        /// Comma-separated subset of delta_c, delta_h, tmqi_q, tmqi_s, tmqi_n, psnr.
        #[arg(long, value_delimiter = ',', default_value = "delta_c,delta_h,tmqi_q,tmqi_s,tmqi_n")]
        metrics: Vec<MetricArg>,
        /// LDR image that `psnr` compares against.
        #[arg(long)]
        reference: Option<PathBuf>,
    },
    /// Run both pipelines over a corpus and write CSV tables and images.
    Report {
        /// Manifest with one HDR path per line plus an optional name.
        #[arg(long, required_unless_present = "synthetic", conflicts_with = "synthetic")]
        manifest: Option<PathBuf>,
        /// Use the built-in synthetic corpus (written to `<output-dir>/corpus`).
        #[arg(long)]
        synthetic: bool,
        #[arg(long, default_value_t = 80, value_parser = clap::value_parser!(u8).range(1..=100))]
        quality: u8,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "default,reinhard,drago")]
        operators: Vec<OperatorArg>,
        #[arg(long)]
        output_dir: PathBuf,
        /// Only write the CSV tables.
        #[arg(long)]
        skip_images: bool,
    },
}

#[derive(Args)]
struct TmoArgs {
    #[arg(long, value_enum, default_value_t = OperatorArg::Default)]
    operator: OperatorArg,
    #[arg(long)]
    key: Option<f64>,
    /// Reinhard white point in scaled units (defaults to the image maximum).
    #[arg(long)]
    white: Option<f64>,
    /// Drago bias.
    #[arg(long)]
    bias: Option<f64>,
    #[arg(long)]
    saturation: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
}

impl TmoArgs {
    fn params(&self) -> TmoParams {
        let mut p = TmoParams::with_operator(self.operator.into());
        if let Some(v) = self.key {
            p.key = v;
        }
        if let Some(v) = self.white {
            p.white = v;
        }
        if let Some(v) = self.bias {
            p.bias = v;
        }
        if let Some(v) = self.saturation {
            p.saturation = v;
        }
        if let Some(v) = self.gamma {
            p.gamma = v;
        }
        p
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OperatorArg {
    Default,
    Reinhard,
    Drago,
}

impl From<OperatorArg> for Operator {
    fn from(o: OperatorArg) -> Self {
        match o {
            OperatorArg::Default => Operator::GlobalPhotographic,
            OperatorArg::Reinhard => Operator::ReinhardGlobal,
            OperatorArg::Drago => Operator::Drago,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Layer {
    Ldr,
    Hdr,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum MetricArg {
    #[value(name = "delta_c")]
    DeltaC,
    #[value(name = "delta_h")]
    DeltaH,
    #[value(name = "tmqi_q")]
    TmqiQ,
    #[value(name = "tmqi_s")]
    TmqiS,
    #[value(name = "tmqi_n")]
    TmqiN,
    #[value(name = "psnr")]
    Psnr,
}

impl MetricArg {
    fn name(self) -> &'static str {
        match self {
            MetricArg::DeltaC => "delta_c",
            MetricArg::DeltaH => "delta_h",
            MetricArg::TmqiQ => "tmqi_q",
            MetricArg::TmqiS => "tmqi_s",
            MetricArg::TmqiN => "tmqi_n",
            MetricArg::Psnr => "psnr",
        }
    }
}

/// Failures that are the caller's fault rather than the data's.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct UsageError(String);

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Tonemap { input, tmo, output } => cmd_tonemap(&input, &tmo, &output),
        Command::Encode {
            input,
            quality,
            tmo,
            compensate,
            output,
        } => cmd_encode(&input, quality, &tmo, compensate, &output),
        Command::Decode { input, layer, output } => cmd_decode(&input, layer, &output),
        Command::Metrics {
            ldr,
            hdr,
            metrics,
            reference,
        } => cmd_metrics(&ldr, &hdr, &metrics, reference.as_deref()),
        Command::Report {
            manifest,
            synthetic,
            quality,
            operators,
            output_dir,
            skip_images,
        } => {
            let manifest = match manifest {
                Some(m) => m,
                None => {
                    debug_assert!(synthetic);
                    corpus::write_corpus(&output_dir.join("corpus"))?
                }
            };
            let operators = operators.into_iter().map(Operator::from).collect();
            cmd_report(&manifest, quality, operators, &output_dir, !skip_images)
        }
    }
}

fn read_hdr(path: &Path) -> anyhow::Result<HdrImage> {
    read_hdr_file(path).with_context(|| format!("reading {}", path.display()))
}

fn write_file(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn extension(path: &Path) -> String {
    path.extension()
        .map(|e| e.to_string_lossy().to_ascii_lowercase())
        .unwrap_or_default()
}

fn cmd_tonemap(input: &Path, args: &TmoArgs, output: &Path) -> anyhow::Result<ExitCode> {
    let ext = extension(output);
    if ext != "ppm" && ext != "pfm" {
        return Err(UsageError(format!("output must end in .ppm or .pfm, got {}", output.display())).into());
    }
    let params = args.params();
    params.validate().map_err(|e| UsageError(e.to_string()))?;
    let hdr = read_hdr(input)?;
    let (ldr, curve) = tmo::tone_map(&hdr, &params)?;
    let bytes = if ext == "ppm" {
        write_ppm(&ldr)
    } else {
        write_pfm(&HdrImage::new(ldr.width(), ldr.height(), ldr.into_pixels())?)
    };
    write_file(output, &bytes)?;
    let p = &curve.params;
    eprintln!(
        "operator={} key={} white={} bias={} saturation={} gamma={} log_average={} max_scaled={}",
        p.operator.name(),
        p.key,
        curve.white(),
        p.bias,
        p.saturation,
        p.gamma,
        curve.log_average,
        curve.max_scaled
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_encode(input: &Path, quality: u8, args: &TmoArgs, compensate: bool, output: &Path) -> anyhow::Result<ExitCode> {
    let params = args.params();
    params.validate().map_err(|e| UsageError(e.to_string()))?;
    let hdr = read_hdr(input)?;
    let stream = encode(&hdr, &params, quality, compensate)?;
    let bytes = stream.to_bytes();
    write_file(output, &bytes)?;
    eprintln!(
        "{}x{} q={quality} operator={} compensate={compensate}: {} bytes",
        stream.width,
        stream.height,
        params.operator.name(),
        bytes.len()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_decode(input: &Path, layer: Layer, output: &Path) -> anyhow::Result<ExitCode> {
    let bytes = fs::read(input).with_context(|| format!("reading {}", input.display()))?;
    let out = match layer {
        Layer::Ldr => write_ppm(&decode_ldr_bytes(&bytes).context("parsing stream")?),
        Layer::Hdr => {
            let stream = TwoLayerStream::from_bytes(&bytes).context("parsing stream")?;
            write_pfm(&decode_hdr(&stream)?)
        }
    };
    write_file(output, &out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_metrics(ldr: &Path, hdr: &Path, metrics: &[MetricArg], reference: Option<&Path>) -> anyhow::Result<ExitCode> {
    if metrics.contains(&MetricArg::Psnr) && reference.is_none() {
        return Err(UsageError("psnr needs --reference".into()).into());
    }
    let ldr_img = read_ldr_file(ldr).with_context(|| format!("reading {}", ldr.display()))?;
    let hdr_img = read_hdr(hdr)?;
    let reference: Option<LdrImage> = reference
        .map(|r| read_ldr_file(r).with_context(|| format!("reading {}", r.display())))
        .transpose()?;
    let needs_tmqi = metrics
        .iter()
        .any(|m| matches!(m, MetricArg::TmqiQ | MetricArg::TmqiS | MetricArg::TmqiN));
    let t = if needs_tmqi { Some(tmqi(&ldr_img, &hdr_img)?) } else { None };
    let mut csv = String::from("metric,value\n");
    for &m in metrics {
        let v = match m {
            MetricArg::DeltaC => delta_c(&ldr_img, &hdr_img)?,
            MetricArg::DeltaH => delta_h(&ldr_img, &hdr_img)?,
            MetricArg::TmqiQ => t.unwrap().q,
            MetricArg::TmqiS => t.unwrap().s,
            MetricArg::TmqiN => t.unwrap().n,
            MetricArg::Psnr => psnr(&ldr_img, reference.as_ref().unwrap())?,
        };
        csv.push_str(&format!("{},{v:.9}\n", m.name()));
        eprintln!("{:>8}  {v:.6}", m.name());
    }
    std::io::stdout().write_all(csv.as_bytes())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_report(
    manifest: &Path,
    quality: u8,
    operators: Vec<Operator>,
    output_dir: &Path,
    images: bool,
) -> anyhow::Result<ExitCode> {
    let entries = read_manifest(manifest).with_context(|| format!("reading manifest {}", manifest.display()))?;
    let config = ReportConfig {
        quality,
        operators: operators.clone(),
        images,
    };
    let report = run_report(&entries, &config, Some(output_dir))?;
    write_tables(&report, &operators, output_dir)?;
    for op in &operators {
        for metric in TABLE1_METRICS {
            for r in report.rows.iter().filter(|r| r.tmo == *op && r.metric == metric) {
                eprintln!(
                    "{:<10} {:<9} {:<8} conventional {:.4}  proposed {:.4}",
                    r.image,
                    op.name(),
                    metric.name(),
                    r.conventional,
                    r.proposed
                );
            }
        }
    }
    for f in &report.failures {
        eprintln!("failed: {} {}: {}", f.image, f.tmo.map(Operator::name).unwrap_or("-"), f.message);
    }
    if report.failures.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        bail!("{} pipeline run(s) failed; see errors.csv", report.failures.len())
    }
}
