use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use maskfilter::config::{load_config, set_param};
use maskfilter::io::{
    list_indexed, load_sequence, read_ground_truth, read_mask, write_gray, write_mask, write_rgb,
    SequenceSource,
};
use maskfilter::metrics::{confusion, roc_sweep, Confusion, GroundTruth};
use maskfilter::pipeline::{Enhancer, PipelineParams};
use maskfilter::synth::{synth_sequence, CheckerSquare, SynthSpec};

#[derive(Parser)]
#[command(
    name = "maskfilter",
    version,
    about = "Refine change-detection masks with an integrated guided + spatiotemporal tree filter"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enhance a sequence of coarse masks.
    Enhance(EnhanceArgs),
    /// Score predicted masks against ground truth.
    Evaluate(EvaluateArgs),
    /// Sweep the binarization threshold and write an ROC curve.
    Roc(RocArgs),
    /// Write a synthetic checkerboard sequence.
    Synth(SynthArgs),
}

/// Filter parameters. A config file is applied first, then flags.
#[derive(Args, Debug, Default)]
struct ParamArgs {
    /// key=value parameter file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Tree-filter similarity scale (0-255 intensity units)
    #[arg(long)]
    sigma: Option<f64>,
    /// Guided-filter window radius
    #[arg(long)]
    radius: Option<usize>,
    /// Guided-filter regularization
    #[arg(long)]
    epsilon: Option<f64>,
    /// Frames per spatiotemporal volume
    #[arg(long)]
    k: Option<usize>,
    /// Tree-filter weight; the guided filter gets 1 - w1
    #[arg(long)]
    w1: Option<f64>,
    /// Binarization threshold
    #[arg(long)]
    thb: Option<f64>,
    /// Minimum component area, exclusive
    #[arg(long)]
    tharea: Option<usize>,
    /// Centroid matching radius in pixels
    #[arg(long)]
    thr: Option<f64>,
    /// Box enlargement margin in pixels
    #[arg(long)]
    margin: Option<usize>,
}

impl ParamArgs {
    fn resolve(&self) -> Result<PipelineParams> {
        let mut params = match &self.config {
            Some(path) => {
                load_config(path).with_context(|| format!("reading config {}", path.display()))?
            }
            None => PipelineParams::default(),
        };
        let overrides = [
            ("sigma", self.sigma.map(|v| v.to_string())),
            ("radius", self.radius.map(|v| v.to_string())),
            ("epsilon", self.epsilon.map(|v| v.to_string())),
            ("k", self.k.map(|v| v.to_string())),
            ("w1", self.w1.map(|v| v.to_string())),
            ("thb", self.thb.map(|v| v.to_string())),
            ("tharea", self.tharea.map(|v| v.to_string())),
            ("thr", self.thr.map(|v| v.to_string())),
            ("margin", self.margin.map(|v| v.to_string())),
        ];
        for (key, value) in overrides {
            if let Some(value) = value {
                set_param(&mut params, key, &value)?;
            }
        }
        params.validate()?;
        Ok(params)
    }
}

#[derive(Args)]
struct EnhanceArgs {
    /// Directory of input frames
    #[arg(long)]
    input: PathBuf,
    /// Directory of coarse masks, indexed like the frames
    #[arg(long)]
    masks: PathBuf,
    /// Output directory for enhanced masks
    #[arg(long)]
    out: PathBuf,
    /// Also write the pre-threshold gray composites here
    #[arg(long)]
    gray_out: Option<PathBuf>,
    /// Per-frame timing CSV [default: <out>/timing.csv]
    #[arg(long)]
    timing: Option<PathBuf>,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Directory of predicted masks
    #[arg(long)]
    pred: PathBuf,
    /// Directory of ground-truth masks
    #[arg(long)]
    gt: PathBuf,
    /// Sequence name for the report [default: name of the ground truth's parent directory]
    #[arg(long)]
    sequence: Option<String>,
    /// Report path [default: stdout]
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RocArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    masks: PathBuf,
    #[arg(long)]
    gt: PathBuf,
    /// Output CSV [default: stdout]
    #[arg(long)]
    out: Option<PathBuf>,
    /// Threshold spacing; thresholds run from 0 to 255
    #[arg(long, default_value_t = 5.0)]
    step: f64,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Args)]
struct SynthArgs {
    /// Output root; input/, masks/ and groundtruth/ are created inside
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 8)]
    frames: usize,
    #[arg(long, default_value_t = 160)]
    width: usize,
    #[arg(long, default_value_t = 120)]
    height: usize,
    /// Per-frame translation in x
    #[arg(long, default_value_t = 3, allow_hyphen_values = true)]
    dx: isize,
    /// Per-frame translation in y
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    dy: isize,
    /// Add a second, smaller square
    #[arg(long)]
    two_objects: bool,
    #[arg(long, default_value_t = 0.3)]
    p_fn: f64,
    #[arg(long, default_value_t = 0.02)]
    p_fp: f64,
    /// Seed for the background texture
    #[arg(long, default_value_t = 7)]
    background_seed: u64,
    /// Seed for mask corruption (frame t uses seed + t)
    #[arg(long, default_value_t = 11)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Enhance(args) => enhance(args),
        Command::Evaluate(args) => evaluate(args),
        Command::Roc(args) => roc(args),
        Command::Synth(args) => synth(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn output_sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            Box::new(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?)
        }
        None => Box::new(std::io::stdout().lock()),
    })
}

fn enhance(args: EnhanceArgs) -> Result<()> {
    let params = args.params.resolve()?;
    let frames = load_sequence(&SequenceSource {
        input_dir: args.input,
        mask_dir: args.masks,
        gt_dir: None,
    })?;
    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    if let Some(dir) = &args.gray_out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let timing_path = args.timing.unwrap_or_else(|| args.out.join("timing.csv"));
    let mut timing = csv::Writer::from_path(&timing_path)
        .with_context(|| format!("creating {}", timing_path.display()))?;
    timing.write_record(["frame", "milliseconds", "regions"])?;

    let mut enhancer = Enhancer::new(params)?;
    for frame in frames {
        let frame = frame?;
        let start = Instant::now();
        let out = enhancer.process(frame.frame, frame.mask)?;
        let ms = start.elapsed().as_secs_f64() * 1e3;
        write_mask(
            &args.out.join(format!("bin{:06}.png", frame.index)),
            &out.mask,
        )?;
        if let Some(dir) = &args.gray_out {
            write_gray(&dir.join(format!("gray{:06}.png", frame.index)), &out.gray)?;
        }
        timing.write_record([
            frame.index.to_string(),
            format!("{ms:.3}"),
            out.regions.len().to_string(),
        ])?;
    }
    timing.flush()?;
    Ok(())
}

fn evaluate(args: EvaluateArgs) -> Result<()> {
    if !args.gt.is_dir() {
        bail!(
            "ground-truth directory {} does not exist",
            args.gt.display()
        );
    }
    let preds = list_indexed(&args.pred)?;
    let mut gts = list_indexed(&args.gt)?;
    if preds.is_empty() {
        bail!("no predicted masks in {}", args.pred.display());
    }
    let pairs = preds
        .into_iter()
        .map(|(index, pred)| {
            let gt = gts.remove(&index).with_context(|| {
                format!("frame {index} has no ground truth in {}", args.gt.display())
            })?;
            Ok((index, pred, gt))
        })
        .collect::<Result<Vec<_>>>()?;
    let sequence = args.sequence.unwrap_or_else(|| {
        fs::canonicalize(&args.gt)
            .ok()
            .and_then(|p| {
                p.parent()
                    .and_then(|p| p.file_name())
                    .map(|n| n.to_string_lossy().into_owned())
            })
            .unwrap_or_else(|| "sequence".into())
    });

    let mut report = csv::Writer::from_writer(output_sink(args.out.as_deref())?);
    report.write_record([
        "sequence",
        "frame",
        "tp",
        "fp",
        "tn",
        "fn",
        "precision",
        "recall",
        "fmeasure",
    ])?;
    let row = |frame: String, c: &Confusion| {
        vec![
            sequence.clone(),
            frame,
            c.tp.to_string(),
            c.fp.to_string(),
            c.tn.to_string(),
            c.fn_.to_string(),
            format!("{:.6}", c.precision()),
            format!("{:.6}", c.recall()),
            format!("{:.6}", c.f_measure()),
        ]
    };
    let mut total = Confusion::default();
    for (index, pred, gt) in pairs {
        let c = confusion(&read_mask(&pred)?, &read_ground_truth(&gt)?)
            .with_context(|| format!("frame {index}"))?;
        total += c;
        report.write_record(row(index.to_string(), &c))?;
    }
    report.write_record(row("total".into(), &total))?;
    report.flush()?;
    Ok(())
}

fn roc(args: RocArgs) -> Result<()> {
    let params = args.params.resolve()?;
    if !(args.step > 0.0 && args.step.is_finite()) {
        bail!("--step must be positive, got {}", args.step);
    }
    let frames = load_sequence(&SequenceSource {
        input_dir: args.input,
        mask_dir: args.masks,
        gt_dir: Some(args.gt),
    })?;
    let mut thresholds = Vec::new();
    let mut th = 0.0;
    while th <= 255.0 {
        thresholds.push(th);
        th += args.step;
    }

    let mut enhancer = Enhancer::new(params)?;
    let (mut grays, mut gts): (Vec<_>, Vec<GroundTruth>) = (Vec::new(), Vec::new());
    for frame in frames {
        let frame = frame?;
        let out = enhancer.process(frame.frame, frame.mask)?;
        grays.push(out.gray);
        gts.push(frame.gt.expect("ground-truth directory was given"));
    }
    let curve = roc_sweep(&grays, &gts, &thresholds)?;

    let mut writer = csv::Writer::from_writer(output_sink(args.out.as_deref())?);
    writer.write_record(["threshold", "fpr", "tpr"])?;
    for p in curve {
        writer.write_record([
            p.threshold.to_string(),
            format!("{:.6}", p.fpr),
            format!("{:.6}", p.tpr),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

fn synth(args: SynthArgs) -> Result<()> {
    let base = SynthSpec::default();
    let square = base.objects[0].clone();
    let mut objects = vec![CheckerSquare {
        x: args.width / 4,
        y: args.height / 4,
        size: args.width.min(args.height) * 2 / 5,
        ..square.clone()
    }];
    if args.two_objects {
        let size = args.width.min(args.height) / 5;
        objects.push(CheckerSquare {
            x: args.width * 11 / 16,
            y: args.height / 2,
            size,
            pitch: (size / 4).max(1),
            ..square
        });
    }
    let spec = SynthSpec {
        width: args.width,
        height: args.height,
        objects,
        background_seed: args.background_seed,
        p_fn: args.p_fn,
        p_fp: args.p_fp,
        corruption_seed: args.seed,
        ..base
    };
    spec.validate()?;
    if args.frames == 0 {
        bail!("--frames must be at least 1");
    }
    let scenes = synth_sequence(&spec, args.frames, (args.dx, args.dy))?;
    let last = scenes.last().expect("at least one frame");
    if last.gt.count_foreground() != spec.objects.iter().map(|o| o.size * o.size).sum::<usize>() {
        bail!(
            "objects overlap or leave the canvas within {} frames",
            args.frames
        );
    }

    let dirs = ["input", "masks", "groundtruth"].map(|d| args.out.join(d));
    for dir in &dirs {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    for (t, scene) in scenes.iter().enumerate() {
        let index = t + 1;
        write_rgb(&dirs[0].join(format!("in{index:06}.png")), &scene.frame)?;
        write_mask(&dirs[1].join(format!("bin{index:06}.png")), &scene.coarse)?;
        write_mask(&dirs[2].join(format!("gt{index:06}.png")), &scene.gt)?;
    }
    Ok(())
}
