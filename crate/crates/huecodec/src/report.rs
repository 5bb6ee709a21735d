//! Batch evaluation of the conventional and hue-compensated pipelines.
//!
//! For every manifest image and operator, the image is encoded twice at the
//! same quality (without and with compensation) and the decoded base layers
//! are scored against the HDR original. Outputs in the report directory:
//!
//! | file | content |
//! |------|---------|
//! | `rows.csv` | `image,tmo,metric,conventional,proposed`, one row per metric |
//! | `table1_<tmo>.csv` | `image,delta_c_conventional,delta_c_proposed,delta_h_conventional,delta_h_proposed` |
//! | `table2_<tmo>.csv` | `image,tmqi_q_conventional,tmqi_q_proposed,tmqi_s_…,tmqi_n_…` |
//! | `errors.csv` | `image,tmo,message` for failed runs (header only when none failed) |
//! | `maxsat/<image>_hdr.ppm` | maximally saturated colors of the HDR original |
//! | `maxsat/<image>_<tmo>_<variant>.ppm` | the same for each decoded LDR |
//! | `heatmaps/<image>_<tmo>_<variant>.ppm` | per-pixel Δc, viridis, `vmax = 0.5` |
//!
//! Gray pixels are painted `(0.5, 0.5, 0.5)` in the max-sat renderings.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use huecodec_core::codec::{encode_with, EncoderConfig};
use huecodec_core::hueplane::max_sat_color;
use huecodec_core::metrics::{delta_c, delta_c_map, delta_h, psnr, tmqi};
use huecodec_core::{HdrImage, LdrImage, Operator, TmoParams};
use rayon::prelude::*;

use crate::hdr_io::{read_hdr_file, write_heatmap, write_ppm, FormatError, Result};

pub const HEATMAP_VMAX: f64 = 0.5;
pub const ACHROMATIC_PAINT: [f64; 3] = [0.5; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    DeltaC,
    DeltaH,
    TmqiQ,
    TmqiS,
    TmqiN,
    Psnr,
}

impl Metric {
    pub const ALL: [Metric; 6] = [
        Metric::DeltaC,
        Metric::DeltaH,
        Metric::TmqiQ,
        Metric::TmqiS,
        Metric::TmqiN,
        Metric::Psnr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::DeltaC => "delta_c",
            Metric::DeltaH => "delta_h",
            Metric::TmqiQ => "tmqi_q",
            Metric::TmqiS => "tmqi_s",
            Metric::TmqiN => "tmqi_n",
            Metric::Psnr => "psnr",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub image: String,
    pub tmo: Operator,
    pub metric: Metric,
    pub conventional: f64,
    pub proposed: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub path: PathBuf,
    pub name: String,
}

/// One HDR path per line, optionally followed by a display name.
/// Blank lines and lines starting with `#` are skipped; relative paths are
/// resolved against `base_dir`.
pub fn parse_manifest(text: &str, base_dir: &Path) -> Result<Vec<ManifestEntry>> {
    let mut entries = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let path = PathBuf::from(parts.next().unwrap());
        let name = match parts.next() {
            Some(name) => name.to_string(),
            None => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default(),
        };
        if parts.next().is_some() {
            return Err(FormatError::Format(format!("manifest line {}: expected `path [name]`", n + 1)));
        }
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)) {
            return Err(FormatError::Format(format!("manifest line {}: bad image name {name:?}", n + 1)));
        }
        let path = if path.is_relative() { base_dir.join(path) } else { path };
        entries.push(ManifestEntry { path, name });
    }
    Ok(entries)
}

pub fn read_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    let text = fs::read_to_string(path)?;
    parse_manifest(&text, path.parent().unwrap_or(Path::new(".")))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportConfig {
    pub quality: u8,
    pub operators: Vec<Operator>,
    /// Also write max-sat PPMs and Δc heatmaps.
    pub images: bool,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self {
            quality: 80,
            operators: Operator::ALL.to_vec(),
            images: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub image: String,
    pub tmo: Option<Operator>,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub rows: Vec<ReportRow>,
    pub failures: Vec<Failure>,
}

/// Metric values of one decoded LDR against its HDR original, in
/// [`Metric::ALL`] order.
pub fn score(decoded: &LdrImage, base_input: &LdrImage, hdr: &HdrImage) -> huecodec_core::Result<[f64; 6]> {
    let t = tmqi(decoded, hdr)?;
    Ok([
        delta_c(decoded, hdr)?,
        delta_h(decoded, hdr)?,
        t.q,
        t.s,
        t.n,
        psnr(decoded, base_input)?,
    ])
}

/// Maximally saturated colors as an image; gray pixels are painted
/// [`ACHROMATIC_PAINT`].
pub fn max_sat_image(width: usize, height: usize, pixels: &[[f64; 3]]) -> LdrImage {
    let out = pixels
        .iter()
        .map(|&p| max_sat_color(p).color().unwrap_or(ACHROMATIC_PAINT))
        .collect();
    LdrImage::new(width, height, out).expect("max-sat colors lie in the unit cube")
}

struct Variant {
    decoded: LdrImage,
    scores: [f64; 6],
}

fn run_variant(hdr: &HdrImage, op: Operator, quality: u8, compensate: bool) -> huecodec_core::Result<Variant> {
    let config = EncoderConfig::new(TmoParams::with_operator(op), quality, compensate);
    let out = encode_with(hdr, &config)?;
    let scores = score(&out.base_decoded, &out.base_input, hdr)?;
    Ok(Variant {
        decoded: out.base_decoded,
        scores,
    })
}

fn write_images(dir: &Path, name: &str, op: Operator, label: &str, hdr: &HdrImage, v: &Variant) -> Result<()> {
    let (w, h) = v.decoded.dims();
    let stem = format!("{name}_{}_{label}.ppm", op.name());
    fs::write(dir.join("maxsat").join(&stem), write_ppm(&max_sat_image(w, h, v.decoded.pixels())))?;
    let map = delta_c_map(&v.decoded, hdr)?;
    fs::write(dir.join("heatmaps").join(&stem), write_heatmap(&map, HEATMAP_VMAX)?)?;
    Ok(())
}

fn process_image(entry: &ManifestEntry, config: &ReportConfig, out_dir: Option<&Path>) -> (Vec<ReportRow>, Vec<Failure>) {
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let fail = |tmo, message: String| Failure {
        image: entry.name.clone(),
        tmo,
        message,
    };
    let hdr = match read_hdr_file(&entry.path) {
        Ok(h) => h,
        Err(e) => {
            failures.push(fail(None, format!("{}: {e}", entry.path.display())));
            return (rows, failures);
        }
    };
    if let (Some(dir), true) = (out_dir, config.images) {
        let img = max_sat_image(hdr.width(), hdr.height(), hdr.pixels());
        if let Err(e) = fs::write(dir.join("maxsat").join(format!("{}_hdr.ppm", entry.name)), write_ppm(&img)) {
            failures.push(fail(None, e.to_string()));
        }
    }
    for &op in &config.operators {
        let result = (|| -> Result<[[f64; 6]; 2]> {
            let conv = run_variant(&hdr, op, config.quality, false)?;
            let prop = run_variant(&hdr, op, config.quality, true)?;
            if let (Some(dir), true) = (out_dir, config.images) {
                write_images(dir, &entry.name, op, "conventional", &hdr, &conv)?;
                write_images(dir, &entry.name, op, "proposed", &hdr, &prop)?;
            }
            Ok([conv.scores, prop.scores])
        })();
        match result {
            Ok([conv, prop]) => rows.extend(Metric::ALL.iter().enumerate().map(|(i, &metric)| ReportRow {
                image: entry.name.clone(),
                tmo: op,
                metric,
                conventional: conv[i],
                proposed: prop[i],
            })),
            Err(e) => failures.push(fail(Some(op), e.to_string())),
        }
    }
    (rows, failures)
}

/// Scores every entry; images are processed in parallel and the results
/// are assembled in manifest order. With `out_dir`, per-image PPMs are
/// written as each image completes.
pub fn run_report(entries: &[ManifestEntry], config: &ReportConfig, out_dir: Option<&Path>) -> Result<Report> {
    if let (Some(dir), true) = (out_dir, config.images) {
        fs::create_dir_all(dir.join("maxsat"))?;
        fs::create_dir_all(dir.join("heatmaps"))?;
    }
    let per_image: Vec<_> = entries
        .par_iter()
        .map(|e| process_image(e, config, out_dir))
        .collect();
    let mut report = Report::default();
    for (rows, failures) in per_image {
        report.rows.extend(rows);
        report.failures.extend(failures);
    }
    Ok(report)
}

fn num(v: f64) -> String {
    format!("{v:.9}")
}

pub fn rows_csv(rows: &[ReportRow]) -> String {
    let mut s = String::from("image,tmo,metric,conventional,proposed\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            r.image,
            r.tmo.name(),
            r.metric.name(),
            num(r.conventional),
            num(r.proposed)
        );
    }
    s
}

/// One line per image, paired conventional/proposed columns per metric.
pub fn table_csv(rows: &[ReportRow], tmo: Operator, metrics: &[Metric]) -> String {
    let mut s = String::from("image");
    for m in metrics {
        let _ = write!(s, ",{0}_conventional,{0}_proposed", m.name());
    }
    s.push('\n');
    let mut images: Vec<&str> = Vec::new();
    for r in rows.iter().filter(|r| r.tmo == tmo) {
        if !images.contains(&r.image.as_str()) {
            images.push(&r.image);
        }
    }
    for image in images {
        s.push_str(image);
        for &m in metrics {
            match rows.iter().find(|r| r.tmo == tmo && r.image == image && r.metric == m) {
                Some(r) => {
                    let _ = write!(s, ",{},{}", num(r.conventional), num(r.proposed));
                }
                None => s.push_str(",,"),
            }
        }
        s.push('\n');
    }
    s
}

pub fn failures_csv(failures: &[Failure]) -> String {
    let mut s = String::from("image,tmo,message\n");
    for f in failures {
        let message = f.message.replace('"', "\"\"");
        let _ = writeln!(
            s,
            "{},{},\"{message}\"",
            f.image,
            f.tmo.map(Operator::name).unwrap_or("")
        );
    }
    s
}

pub const TABLE1_METRICS: [Metric; 2] = [Metric::DeltaC, Metric::DeltaH];
pub const TABLE2_METRICS: [Metric; 3] = [Metric::TmqiQ, Metric::TmqiS, Metric::TmqiN];

/// Writes `rows.csv`, `errors.csv` and the per-operator tables.
pub fn write_tables(report: &Report, operators: &[Operator], dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("rows.csv"), rows_csv(&report.rows))?;
    fs::write(dir.join("errors.csv"), failures_csv(&report.failures))?;
    for &op in operators {
        fs::write(
            dir.join(format!("table1_{}.csv", op.name())),
            table_csv(&report.rows, op, &TABLE1_METRICS),
        )?;
        fs::write(
            dir.join(format!("table2_{}.csv", op.name())),
            table_csv(&report.rows, op, &TABLE2_METRICS),
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_parsing() {
        let text = "# corpus\n\na.hdr\n/abs/b.pfm night\n";
        let entries = parse_manifest(text, Path::new("/data")).unwrap();
        assert_eq!(
            entries,
            vec![
                ManifestEntry {
                    path: PathBuf::from("/data/a.hdr"),
                    name: "a".into()
                },
                ManifestEntry {
                    path: PathBuf::from("/abs/b.pfm"),
                    name: "night".into()
                },
            ]
        );
        assert!(parse_manifest("a.hdr x y\n", Path::new(".")).is_err());
        assert!(parse_manifest("a.hdr bad,name\n", Path::new(".")).is_err());
    }

    #[test]
    fn metric_names_round_trip() {
        for m in Metric::ALL {
            assert_eq!(Metric::from_name(m.name()), Some(m));
        }
        assert_eq!(Metric::from_name("ssim"), None);
    }

    #[test]
    fn max_sat_rendering_paints_gray() {
        let img = max_sat_image(2, 1, &[[0.3; 3], [0.8, 0.2, 0.4]]);
        assert_eq!(img.pixels()[0], ACHROMATIC_PAINT);
        let c = img.pixels()[1];
        assert_eq!(c[0], 1.0);
        assert_eq!(c[1], 0.0);
        assert!((c[2] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn empty_manifest_gives_empty_tables() {
        let report = run_report(&[], &ReportConfig::default(), None).unwrap();
        assert!(report.rows.is_empty() && report.failures.is_empty());
        assert_eq!(
            table_csv(&report.rows, Operator::Drago, &TABLE1_METRICS),
            "image,delta_c_conventional,delta_c_proposed,delta_h_conventional,delta_h_proposed\n"
        );
    }

    #[test]
    fn missing_file_is_recorded() {
        let entries = vec![ManifestEntry {
            path: PathBuf::from("/nonexistent/x.hdr"),
            name: "x".into(),
        }];
        let report = run_report(&entries, &ReportConfig::default(), None).unwrap();
        assert!(report.rows.is_empty());
        assert_eq!(report.failures.len(), 1);
        assert!(failures_csv(&report.failures).starts_with("image,tmo,message\nx,,\""));
    }
}
