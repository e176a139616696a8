//! The `verify` subcommand: machine-readable pass/fail lines for the
//! invariant suites of every module, over a configurable range of lengths.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Args;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hadz::binlinear::{kernel, rank};
use hadz::classify::{profile, ProfileConfig};
use hadz::codeset::{enumerate, enumerate_mixed, verify_shape_properties};
use hadz::constructions::{
    base_matrix_248, build_248, build_z2z4, enumerate_types, extend_order2, type_params, Family,
    GeneratorMatrix, TypeSignature,
};
use hadz::graymap::{gray_mixed, phi, BinaryWord};
use hadz::MixedVector;

#[derive(Args)]
pub struct VerifyArgs {
    /// Largest binary length exponent t to cover.
    #[arg(long, default_value_t = 6)]
    t_max: u32,
    /// Seed for the randomized permutation checks (printed for replay).
    #[arg(long, default_value_t = 20260811)]
    seed: u64,
    /// Optional matrix dump to verify against its descriptor.
    #[arg(long, value_name = "PATH", requires = "descriptor")]
    matrix: Option<PathBuf>,
    /// Descriptor for --matrix.
    #[arg(long, value_name = "PATH")]
    descriptor: Option<PathBuf>,
}

struct Suite {
    passed: u64,
    failed: u64,
}

impl Suite {
    fn new() -> Self {
        Suite { passed: 0, failed: 0 }
    }

    fn check(&mut self, name: &str, outcome: Result<(), String>) {
        match outcome {
            Ok(()) => {
                self.passed += 1;
                println!("PASS {}", name);
            }
            Err(detail) => {
                self.failed += 1;
                println!("FAIL {}: {}", name, detail);
            }
        }
    }
}

fn ensure(cond: bool, detail: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(detail())
    }
}

fn gray_map_suite(suite: &mut Suite) {
    suite.check("graymap.tables", {
        let z4: Vec<String> = (0..4).map(|u| phi(2, u).unwrap().to_string()).collect();
        let z8: Vec<String> = (0..8).map(|u| phi(3, u).unwrap().to_string()).collect();
        ensure(
            z4 == ["00", "01", "11", "10"]
                && z8 == ["0000", "0101", "0011", "0110", "1111", "1010", "1100", "1001"],
            || format!("tables {:?} {:?}", z4, z8),
        )
    });
    for s in 1..=4u32 {
        let modulus = 1u64 << s;
        let half = modulus >> 1;
        suite.check(&format!("graymap.top-additivity s={}", s), {
            let mut bad = None;
            for u in 0..modulus {
                for v in 0..modulus {
                    let lhs = phi(s, (half * u + v) % modulus).unwrap();
                    let rhs = phi(s, (half * u) % modulus).unwrap().xor(&phi(s, v).unwrap());
                    if lhs != rhs {
                        bad = Some((u, v));
                    }
                }
            }
            ensure(bad.is_none(), || format!("failed at {:?}", bad))
        });
        suite.check(&format!("graymap.distance-invariance s={}", s), {
            let mut bad = None;
            for u in 0..modulus {
                for v in 0..modulus {
                    let d = phi(s, u).unwrap().distance(&phi(s, v).unwrap());
                    let w = phi(s, (u + modulus - v) % modulus).unwrap().weight();
                    if d != w {
                        bad = Some((u, v));
                    }
                }
            }
            ensure(bad.is_none(), || format!("failed at {:?}", bad))
        });
    }
    suite.check("graymap.injectivity s<=6", {
        let mut ok = true;
        for s in 1..=6u32 {
            let mut seen = std::collections::HashSet::new();
            for u in 0..1u64 << s {
                ok &= seen.insert(phi(s, u).unwrap());
            }
        }
        ensure(ok, || "collision".into())
    });
}

fn constructions_suite(suite: &mut Suite, t_max: u32) {
    suite.check("constructions.seed-matrix", {
        let m = base_matrix_248();
        let rows: Vec<String> = m.rows().iter().map(|r| r.to_string()).collect();
        ensure(rows == ["11|2|4", "01|1|1"], || format!("{:?}", rows))
    });
    suite.check("constructions.type-params-identities", {
        let mut bad = None;
        for t1 in 1..=5u32 {
            for t2 in 0..=5u32 {
                for t3 in 1..=5u32 {
                    let (a1, a2, a3) = type_params(t1, t2, t3).unwrap();
                    let s = t1 + t2;
                    if a1 != 1 << (s + t3 - 1)
                        || a1 + 2 * a2 != 1 << (2 * s + t3 - 1)
                        || a1 + 2 * a2 + 4 * a3 != 1 << (3 * t1 + 2 * t2 + t3 - 1)
                    {
                        bad = Some((t1, t2, t3));
                    }
                }
            }
        }
        ensure(bad.is_none(), || format!("identity broken at {:?}", bad))
    });
    suite.check("constructions.order2-doubles-alphas", {
        let m = build_248(1, 1, 1).unwrap();
        let d = extend_order2(&m).unwrap();
        let (a1, a2, a3) = m.shape();
        ensure(d.shape() == (2 * a1, 2 * a2, 2 * a3), || {
            format!("{:?} -> {:?}", m.shape(), d.shape())
        })
    });
    for t in 3..=t_max {
        for sig in enumerate_types(t, Family::Z2Z4Z8).unwrap() {
            suite.check(&format!("constructions.matrix-valid {}", sig), {
                match GeneratorMatrix::build(&sig) {
                    Ok(m) => m.validate().map_err(|e| e.to_string()),
                    Err(e) => Err(e.to_string()),
                }
            });
        }
    }
}

fn code_suites(suite: &mut Suite, t_max: u32, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut families: Vec<TypeSignature> = Vec::new();
    for t in 3..=t_max {
        families.extend(enumerate_types(t, Family::Z2Z4Z8).unwrap());
        families.extend(enumerate_types(t, Family::Z2Z4).unwrap());
    }
    for sig in &families {
        let image = match enumerate(&GeneratorMatrix::build(sig).unwrap())
            .and_then(|c| c.gray_image())
        {
            Ok(image) => image,
            Err(e) => {
                suite.check(&format!("codeset.enumerate {}", sig), Err(e.to_string()));
                continue;
            }
        };
        suite.check(&format!("codeset.size {}", sig), {
            ensure(image.size() as u64 == sig.code_size(), || {
                format!("{} words, expected {}", image.size(), sig.code_size())
            })
        });
        suite.check(&format!("codeset.hadamard {}", sig), {
            let check = image.is_hadamard();
            ensure(check.ok, || check.to_string())
        });
        if image.length() <= 256 {
            suite.check(&format!("codeset.distance-oracle {}", sig), {
                let fast = image.min_weight_nonzero().map_err(|e| e.to_string());
                let slow = image.pairwise_min_distance().map_err(|e| e.to_string());
                match (fast, slow) {
                    (Ok(a), Ok(b)) => ensure(a == b, || format!("{} vs {}", a, b)),
                    (a, b) => Err(format!("{:?} vs {:?}", a, b)),
                }
            });
        }
        suite.check(&format!("binlinear.bounds {}", sig), {
            let log2 = image.size().trailing_zeros() as usize;
            let r = rank(&image);
            match kernel(&image) {
                Ok(k) => {
                    let n = image.length();
                    ensure(
                        k.dimension <= log2
                            && log2 <= r
                            && k.members.contains(&BinaryWord::zero(n))
                            && k.members.contains(&BinaryWord::ones(n)),
                        || format!("k={} log2={} r={}", k.dimension, log2, r),
                    )
                }
                Err(e) => Err(e.to_string()),
            }
        });
        suite.check(&format!("classify.profile-permutation-invariance {}", sig), {
            let config = ProfileConfig::default();
            (|| {
                let p = profile(&image, &config).map_err(|e| e.to_string())?;
                for _ in 0..2 {
                    let mut perm: Vec<usize> = (0..image.length()).collect();
                    perm.shuffle(&mut rng);
                    let q = profile(&image.permute(&perm).unwrap(), &config)
                        .map_err(|e| e.to_string())?;
                    if q != p {
                        return Err("profile changed under permutation".to_string());
                    }
                }
                Ok(())
            })()
        });
    }
    // Shape properties for the t3 = 1 members within reach.
    for t1 in 1..=3u32 {
        for t2 in 0..=3u32 {
            let sig = TypeSignature::Z2Z4Z8 { t1, t2, t3: 1 };
            if sig.size_log2() > t_max + 1 {
                continue;
            }
            suite.check(&format!("codeset.shape-properties {}", sig), {
                match verify_shape_properties(&build_248(t1, t2, 1).unwrap()) {
                    Ok(report) => ensure(report.passed(), || {
                        format!(
                            "{} violations, first: {:?}",
                            report.total_violations,
                            report.violations.first()
                        )
                    }),
                    Err(e) => Err(e.to_string()),
                }
            });
        }
    }
}

fn all_one_translation_suite(suite: &mut Suite) {
    // Translating a mixed vector by (1|2|4) complements its Gray image.
    suite.check("graymap.all-one-translation", {
        let shift = MixedVector::new(vec![1, 1], vec![2, 2], vec![4]).unwrap();
        let ones = BinaryWord::ones(2 + 4 + 4);
        let mut bad = None;
        for b in 0..4u8 {
            for q in 0..4u8 {
                for o in 0..8u8 {
                    let v = MixedVector::new(vec![b & 1, b >> 1], vec![q, (q + 1) & 3], vec![o])
                        .unwrap();
                    let lhs = gray_mixed(&v.add(&shift).unwrap());
                    let rhs = gray_mixed(&v).xor(&ones);
                    if lhs != rhs {
                        bad = Some(v.to_string());
                    }
                }
            }
        }
        ensure(bad.is_none(), || format!("failed at {:?}", bad))
    });
}

fn matrix_file_suite(suite: &mut Suite, matrix: &PathBuf, descriptor: &PathBuf) {
    let outcome = (|| -> Result<(), String> {
        let desc_text = std::fs::read_to_string(descriptor)
            .map_err(|e| format!("cannot read {}: {}", descriptor.display(), e))?;
        let sig = TypeSignature::parse_descriptor(&desc_text).map_err(|e| e.to_string())?;
        let dump = std::fs::read_to_string(matrix)
            .map_err(|e| format!("cannot read {}: {}", matrix.display(), e))?;
        let parsed = GeneratorMatrix::parse_dump(sig.clone(), &dump).map_err(|e| e.to_string())?;
        if sig.size_log2() <= 14 {
            let image = enumerate(&parsed)
                .and_then(|c| c.gray_image())
                .map_err(|e| e.to_string())?;
            let check = image.is_hadamard();
            if !check.ok {
                return Err(check.to_string());
            }
        }
        Ok(())
    })();
    suite.check(&format!("verify.matrix-file {}", matrix.display()), outcome);
}

pub fn run(args: &VerifyArgs) -> ExitCode {
    if args.t_max < 3 {
        eprintln!("error: --t-max must be at least 3");
        return ExitCode::from(super::EXIT_USAGE);
    }
    println!("seed: {}", args.seed);
    let mut suite = Suite::new();
    gray_map_suite(&mut suite);
    all_one_translation_suite(&mut suite);
    constructions_suite(&mut suite, args.t_max);
    code_suites(&mut suite, args.t_max, args.seed);
    // Closed-form rank/kernel agreement for the nonlinear z2z4 codes in
    // range; profiles recomputed from scratch on purpose.
    for t in 5..=args.t_max {
        for sig in enumerate_types(t, Family::Z2Z4).unwrap() {
            let (t1, t2) = match sig {
                TypeSignature::Z2Z4 { t1, t2 } => (t1, t2),
                _ => unreachable!(),
            };
            if t1 < 2 {
                continue;
            }
            suite.check(&format!("classify.z2z4-closed-form {}", sig), {
                let image = enumerate_mixed(&build_z2z4(t1, t2).unwrap())
                    .unwrap()
                    .gray_image()
                    .unwrap();
                let expected = hadz::classify::z2z4_rank_kernel(t1, t2).unwrap();
                let got = (rank(&image), kernel(&image).unwrap().dimension);
                ensure(got == expected, || format!("{:?} vs {:?}", got, expected))
            });
        }
    }
    if let (Some(matrix), Some(descriptor)) = (&args.matrix, &args.descriptor) {
        matrix_file_suite(&mut suite, matrix, descriptor);
    }
    println!("summary: {} passed, {} failed", suite.passed, suite.failed);
    if suite.failed > 0 {
        ExitCode::from(super::EXIT_INTEGRITY)
    } else {
        ExitCode::SUCCESS
    }
}
