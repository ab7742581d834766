use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;

use sl2pke::analysis::{self, SampleMode, Statistic};
use sl2pke::attacks::{self, Guess};
use sl2pke::rng::{rng_from_hex, ChaCha20Rng};
use sl2pke::scheme::{
    self, bits_from_hex, bits_to_hex, decrypt_matrix, Ciphertext, Params, PublicKey, SecretKey,
};
use sl2pke::Error;

/// Public-key encryption over the free monoid SL2(N).
#[derive(Parser)]
#[command(name = "sl2pke", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a key pair.
    Keygen(KeygenArgs),
    /// Encrypt a lambda-bit hex message.
    Encrypt(EncryptArgs),
    /// Decrypt a ciphertext; prints the message or `REJECT <reason>`.
    Decrypt(DecryptArgs),
    /// Trace and sup-norm histograms over words of length k.
    Stats(StatsArgs),
    /// Attack demonstrations.
    #[command(subcommand)]
    Attack(AttackCommand),
    /// Time keygen + encrypt + decrypt on a preset.
    Bench(BenchArgs),
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long, conflicts_with = "preset")]
    l: Option<usize>,
    #[arg(long, conflicts_with = "preset")]
    lambda: Option<usize>,
    #[arg(long, conflicts_with = "preset")]
    n: Option<usize>,
    /// set1 (256,256,1), set2 (1,256,16) or set3 (16,256,4).
    #[arg(long)]
    preset: Option<String>,
}

impl ParamArgs {
    fn params(&self) -> Result<Params, Error> {
        match (&self.preset, self.l, self.lambda, self.n) {
            (Some(name), None, None, None) => Params::preset(name),
            (None, Some(l), Some(lambda), Some(n)) => Params::new(l, lambda, n),
            _ => Err(Error::Usage(
                "give either --preset or all of --l, --lambda, --n".into(),
            )),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Generators {
    /// Exactly L and R (requires l = 1).
    #[value(name = "LR")]
    Lr,
}

#[derive(Args)]
struct KeygenArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    out_sk: PathBuf,
    #[arg(long)]
    out_pk: PathBuf,
    /// 256-bit seed as hex; omitted means OS entropy.
    #[arg(long)]
    seed: Option<String>,
    /// Fixed generator words instead of random ones.
    #[arg(long, value_enum)]
    generators: Option<Generators>,
}

#[derive(Args)]
struct EncryptArgs {
    #[arg(long)]
    pk: PathBuf,
    /// Message as hex, most significant bit first.
    #[arg(long)]
    msg_hex: String,
    #[arg(long)]
    out_ct: PathBuf,
    /// XOR the message with a random mask stored in the ciphertext.
    #[arg(long)]
    masked: bool,
    #[arg(long)]
    seed: Option<String>,
}

#[derive(Args)]
struct DecryptArgs {
    #[arg(long)]
    sk: PathBuf,
    #[arg(long)]
    ct: PathBuf,
    #[arg(long)]
    out_hex: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StatKind {
    Trace,
    Supnorm,
    Joint,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    Sample,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(value_enum)]
    kind: StatKind,
    #[arg(long)]
    k: usize,
    /// Bins (per axis for `joint`).
    #[arg(long, default_value_t = 1000)]
    bins: usize,
    #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
    mode: Mode,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long)]
    out_csv: Option<PathBuf>,
    #[arg(long)]
    seed: Option<String>,
}

#[derive(Subcommand)]
enum AttackCommand {
    /// Recover S from an n = 1 public key with generators L, R.
    N1Recover {
        #[arg(long)]
        pk: PathBuf,
    },
    /// Print trace(C), a conjugation invariant.
    TraceLeak {
        #[arg(long)]
        ct: PathBuf,
    },
    /// Decide which of two messages an unmasked ciphertext encrypts.
    Distinguish {
        #[arg(long)]
        pk: PathBuf,
        #[arg(long)]
        ct: PathBuf,
        #[arg(long)]
        mu0: String,
        #[arg(long)]
        mu1: String,
    },
    /// Append one bit to a ciphertext without the secret key.
    Malleate {
        #[arg(long)]
        pk: PathBuf,
        #[arg(long)]
        ct: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        bit: u8,
        /// Also decrypt the result at lambda + 1 bits.
        #[arg(long)]
        sk: Option<PathBuf>,
    },
    /// Repeated distinguishing game against fresh messages.
    Game {
        #[arg(long)]
        pk: PathBuf,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long)]
        masked: bool,
        #[arg(long)]
        seed: Option<String>,
    },
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    preset: String,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long)]
    seed: Option<String>,
}

/// A failure plus its exit code: 1 I/O, 2 usage, 3 reject, 4 parse, 5 attack found nothing.
struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Usage(_) => 2,
            Error::Reject(_) => 3,
            Error::Parse { .. } => 4,
            Error::NoSolution => 5,
            Error::NotInvertible | Error::Exhausted { .. } => 1,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

type CliResult = Result<(), Failure>;

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: 1,
        msg: format!("{}: {e}", path.display()),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

fn write(path: &Path, contents: &str) -> CliResult {
    fs::write(path, contents).map_err(|e| io_failure(path, e))
}

fn load<T>(path: &Path, parse: fn(&str) -> sl2pke::Result<T>) -> Result<T, Failure> {
    parse(&read(path)?).map_err(|e| {
        let mut f = Failure::from(e);
        f.msg = format!("{}: {}", path.display(), f.msg);
        f
    })
}

fn rng(seed: Option<&str>) -> Result<ChaCha20Rng, Failure> {
    Ok(match seed {
        Some(hex) => rng_from_hex(hex)?,
        None => ChaCha20Rng::from_os_rng(),
    })
}

fn keygen(args: KeygenArgs) -> CliResult {
    let params = args.params.params()?;
    let mut r = rng(args.seed.as_deref())?;
    let start = Instant::now();
    let (sk, pk) = match args.generators {
        Some(Generators::Lr) => {
            if params.l != 1 {
                return Err(Error::Usage("--generators LR needs --l 1".into()).into());
            }
            scheme::keygen_with_generators(&params, vec![false], vec![true], &mut r)?
        }
        None => scheme::keygen(&params, &mut r),
    };
    let elapsed = start.elapsed();
    write(&args.out_sk, &sk.to_text())?;
    write(&args.out_pk, &pk.to_text())?;
    println!("params: {params}");
    println!("modulus: 2^{}", params.modulus_bits());
    println!("matrix size: {0}x{0}", params.dim());
    println!("pk payload: {} bits", params.pk_payload_bits());
    println!("sk payload: {} bits", params.sk_payload_bits());
    println!("time: keygen {:.3} s", elapsed.as_secs_f64());
    Ok(())
}

fn encrypt(args: EncryptArgs) -> CliResult {
    let pk = load(&args.pk, PublicKey::from_text)?;
    let mu = bits_from_hex(&args.msg_hex, pk.params.lambda)?;
    let start = Instant::now();
    let ct = if args.masked {
        let mut r = rng(args.seed.as_deref())?;
        scheme::encrypt_masked(&pk, &mu, &mut r)?
    } else {
        scheme::encrypt(&pk, &mu)?
    };
    let elapsed = start.elapsed();
    write(&args.out_ct, &ct.to_text())?;
    println!(
        "encrypted {} bits{}",
        mu.len(),
        if args.masked { " (masked)" } else { "" }
    );
    println!("time: encrypt {:.3} s", elapsed.as_secs_f64());
    Ok(())
}

fn decrypt(args: DecryptArgs) -> CliResult {
    let sk = load(&args.sk, SecretKey::from_text)?;
    let ct = load(&args.ct, Ciphertext::from_text)?;
    match scheme::decrypt(&sk, &ct) {
        Ok(bits) => {
            let hex = bits_to_hex(&bits);
            match &args.out_hex {
                Some(path) => write(path, &format!("{hex}\n"))?,
                None => println!("{hex}"),
            }
            Ok(())
        }
        Err(Error::Reject(reason)) => {
            println!("REJECT {}", reason.code());
            Err(Failure {
                code: 3,
                msg: format!("ciphertext rejected: {reason}"),
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn stats(args: StatsArgs) -> CliResult {
    let mode = match args.mode {
        Mode::Exhaustive => SampleMode::Exhaustive,
        Mode::Sample => SampleMode::Sampled {
            samples: args.samples,
        },
    };
    let mut r = rng(args.seed.as_deref())?;
    let start = Instant::now();
    let csv = match args.kind {
        StatKind::Trace | StatKind::Supnorm => {
            let stat = match args.kind {
                StatKind::Trace => Statistic::Trace,
                _ => Statistic::SupNorm,
            };
            let h = analysis::histogram(stat, args.k, args.bins, mode, &mut r)?;
            println!("statistic: {}", stat.name());
            println!("words: {}", h.total());
            println!("range: [{}, {}]", h.binning.lo, h.binning.hi);
            println!("occupied bins: {}/{}", h.occupied_bins(), h.binning.bins);
            println!("mode bin: {}", h.mode_bin());
            analysis::histogram_to_csv(&h)
        }
        StatKind::Joint => {
            let h = analysis::joint_histogram(args.k, args.bins, mode, &mut r)?;
            let median = analysis::ratio_median(args.k, mode, &mut r)?;
            println!("words: {}", h.total());
            println!("trace range: [{}, {}]", h.trace_bins.lo, h.trace_bins.hi);
            println!("sup-norm range: [{}, {}]", h.norm_bins.lo, h.norm_bins.hi);
            println!("occupied cells: {}", h.occupied_cells());
            println!("RESULT: median_ratio={median:.4}");
            analysis::joint_histogram_to_csv(&h)
        }
    };
    println!("time: stats {:.3} s", start.elapsed().as_secs_f64());
    if let Some(path) = &args.out_csv {
        write(path, &csv)?;
    }
    Ok(())
}

fn attack(cmd: AttackCommand) -> CliResult {
    match cmd {
        AttackCommand::N1Recover { pk } => {
            let pk = load(&pk, PublicKey::from_text)?;
            if pk.params.n != 1 {
                return Err(Error::Usage("n1-recover needs a key with n = 1".into()).into());
            }
            let found = attacks::recover_conjugator_n1(&pk.p0, &pk.p1)?;
            for (i, f) in found.iter().enumerate() {
                let s: Vec<String> = f.s.entries().iter().map(|e| e.to_str_radix(16)).collect();
                println!(
                    "candidate {i}: {:?} verified={} S={}",
                    f.normalization,
                    f.verified,
                    s.join(",")
                );
            }
            let verified = found.iter().any(|f| f.verified);
            println!("RESULT: recovered verified={verified}");
            if verified {
                Ok(())
            } else {
                Err(Error::NoSolution.into())
            }
        }
        AttackCommand::TraceLeak { ct } => {
            let ct = load(&ct, Ciphertext::from_text)?;
            println!("RESULT: trace={}", attacks::trace_leak(&ct.c).value());
            Ok(())
        }
        AttackCommand::Distinguish { pk, ct, mu0, mu1 } => {
            let pk = load(&pk, PublicKey::from_text)?;
            let ct = load(&ct, Ciphertext::from_text)?;
            let lambda = pk.params.lambda;
            let mu0 = bits_from_hex(&mu0, lambda)?;
            let mu1 = bits_from_hex(&mu1, lambda)?;
            let guess = match attacks::distinguish_deterministic(&pk, &ct, &mu0, &mu1)? {
                Guess::Zero => "0",
                Guess::One => "1",
                Guess::Unknown => "unknown",
            };
            println!("RESULT: guess={guess}");
            Ok(())
        }
        AttackCommand::Malleate { pk, ct, bit, sk } => {
            let pk = load(&pk, PublicKey::from_text)?;
            let ct = load(&ct, Ciphertext::from_text)?;
            let ext = attacks::extend_ciphertext(&pk, &ct, bit == 1)?;
            let entries: Vec<String> = ext.c.entries().iter().map(|e| e.to_str_radix(16)).collect();
            println!("C'={}", entries.join(","));
            match sk {
                Some(path) => {
                    let sk = load(&path, SecretKey::from_text)?;
                    let lambda = sk.params.lambda;
                    let at_lambda = match decrypt_matrix(&sk, &ext.c, lambda) {
                        Ok(_) => "accepted".to_string(),
                        Err(Error::Reject(r)) => format!("REJECT {}", r.code()),
                        Err(e) => return Err(e.into()),
                    };
                    let longer = decrypt_matrix(&sk, &ext.c, lambda + 1)?;
                    println!("decrypt at lambda: {at_lambda}");
                    println!(
                        "RESULT: extended bits={} hex={}",
                        lambda + 1,
                        bits_to_hex(&longer)
                    );
                }
                None => println!("RESULT: extended bit={bit}"),
            }
            Ok(())
        }
        AttackCommand::Game {
            pk,
            trials,
            masked,
            seed,
        } => {
            let pk = load(&pk, PublicKey::from_text)?;
            let mut r = rng(seed.as_deref())?;
            let out = attacks::play_distinguishing_game(&pk, trials, masked, &mut r)?;
            println!("unknown: {}", out.unknown);
            println!(
                "RESULT: wins={}/{} rate={:.3}",
                out.wins,
                out.trials,
                out.win_rate()
            );
            Ok(())
        }
    }
}

/// Mean wall times of the reference implementation; `None` never finished.
fn reference_seconds(preset: &str) -> Option<f64> {
    match preset {
        "set1" => Some(19.68),
        "set3" => Some(14.26),
        _ => None,
    }
}

fn bench(args: BenchArgs) -> CliResult {
    if args.trials == 0 {
        return Err(Error::Usage("--trials must be at least 1".into()).into());
    }
    let params = Params::preset(&args.preset)?;
    let mut r = rng(args.seed.as_deref())?;
    let mut totals = Vec::with_capacity(args.trials);
    let mut ok = 0;
    println!("params: {params}");
    for i in 0..args.trials {
        let t0 = Instant::now();
        let (sk, pk) = scheme::keygen(&params, &mut r);
        let t1 = Instant::now();
        let mu = scheme::random_bits(params.lambda, &mut r);
        let ct = scheme::encrypt(&pk, &mu)?;
        let t2 = Instant::now();
        let back = scheme::decrypt(&sk, &ct)?;
        let t3 = Instant::now();
        ok += (back == mu) as usize;
        println!(
            "time: trial {i} keygen={:.3} encrypt={:.3} decrypt={:.3} total={:.3} s",
            (t1 - t0).as_secs_f64(),
            (t2 - t1).as_secs_f64(),
            (t3 - t2).as_secs_f64(),
            (t3 - t0).as_secs_f64()
        );
        totals.push((t3 - t0).as_secs_f64());
    }
    let mean = totals.iter().sum::<f64>() / totals.len() as f64;
    let min = totals.iter().copied().fold(f64::INFINITY, f64::min);
    let max = totals.iter().copied().fold(0.0, f64::max);
    println!("time: mean={mean:.3} min={min:.3} max={max:.3} s");
    match reference_seconds(&args.preset) {
        Some(r) => println!("time: reference={r:.2} s speedup={:.1}x", r / mean),
        None => println!("time: reference=inf (did not finish)"),
    }
    println!("RESULT: trials={} roundtrip_ok={ok}", args.trials);
    if ok == args.trials {
        Ok(())
    } else {
        Err(Failure {
            code: 1,
            msg: format!("{} trials failed to round-trip", args.trials - ok),
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Keygen(a) => keygen(a),
        Command::Encrypt(a) => encrypt(a),
        Command::Decrypt(a) => decrypt(a),
        Command::Stats(a) => stats(a),
        Command::Attack(a) => attack(a),
        Command::Bench(a) => bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
