//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per
//! criterion and exits non-zero if any failed.

mod common;

use std::fs::File;
use std::io::BufReader;
use std::num::NonZeroUsize;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use lex2vec::embedding::{
    normalize, parse_embeddings, write_embeddings, EmbeddingFormat, EmbeddingTable,
    NormalizedEmbeddingTable,
};
use lex2vec::labeler::{cap_labels, label_dimensions, top_k_frequent, DimensionLabeling, Theta};
use lex2vec::lexicon::{load_liwc, load_nrc, Lexicon};
use lex2vec::metrics::{
    avg_labels_per_dimension, sweep, unnamed_ratio, AvgMode, SweepReport, SweepRow,
};
use lex2vec::report::render_sweep_tsv;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{brute_force_counts, random_instance, random_raw_table, RawLexicon};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const PAPER_GRID: [f64; 4] = [0.81, 0.79, 0.77, 0.75];

fn theta(v: f64) -> Theta {
    Theta::new(v).unwrap()
}

fn paper_grid() -> Vec<Theta> {
    PAPER_GRID.iter().map(|&t| theta(t)).collect()
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    };
}

/// Normalized random table plus a lexicon drawn from its vocabulary.
fn vocabulary_fixture(
    rng: &mut ChaCha8Rng,
    words: usize,
    dims: usize,
) -> (NormalizedEmbeddingTable, RawLexicon) {
    let table = normalize(&random_raw_table(rng, words, dims)).unwrap();
    let labels = [
        "anger", "fear", "joy", "sadness", "trust", "positive", "negative",
    ];
    let mut entries = Vec::new();
    for word in table.words() {
        if rng.gen_bool(0.3) {
            for _ in 0..rng.gen_range(1..=3) {
                entries.push((word.clone(), labels.choose(rng).unwrap().to_string(), false));
            }
        }
    }
    for _ in 0..rng.gen_range(0..4) {
        let word = table.words().choose(rng).unwrap();
        let prefix: String = word.chars().take(2).collect();
        entries.push((prefix, labels.choose(rng).unwrap().to_string(), true));
    }
    (
        table,
        RawLexicon {
            name: "fixture".into(),
            entries,
        },
    )
}

fn check_trend(rows: &[SweepRow]) -> Result<(), String> {
    // rows are in descending theta order for one resource
    for pair in rows.windows(2) {
        let (hi, lo) = (&pair[0], &pair[1]);
        ensure!(hi.theta > lo.theta, "rows not in descending theta order");
        ensure!(
            lo.unnamed_ratio <= hi.unnamed_ratio,
            "unnamed ratio rose from {} to {} as theta fell {} -> {}",
            hi.unnamed_ratio,
            lo.unnamed_ratio,
            hi.theta,
            lo.theta
        );
        ensure!(
            lo.avg_labels_all >= hi.avg_labels_all,
            "avg labels fell from {} to {} as theta fell {} -> {}",
            hi.avg_labels_all,
            lo.avg_labels_all,
            hi.theta,
            lo.theta
        );
    }
    Ok(())
}

fn ac1_oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC1);
    let start = Instant::now();
    let thetas = [0.6, 0.75, 0.9];
    for i in 0..200 {
        let inst = random_instance(&mut rng, 32, 8);
        let t = thetas[i % thetas.len()];
        let got = label_dimensions(&inst.table(), &inst.lexicon.build(), theta(t), false)
            .map_err(|e| e.to_string())?;
        let want = brute_force_counts(&inst.rows, &inst.lexicon, t);
        ensure!(
            got.dimensions() == &want[..],
            "instance {i} (theta {t}) differs from brute force"
        );
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    Ok(format!("200 instances in {elapsed:.2?}"))
}

fn ac2_theta_monotonicity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC2);
    for i in 0..60 {
        let (table, lex) = if i % 2 == 0 {
            let inst = random_instance(&mut rng, 32, 8);
            (inst.table(), inst.lexicon)
        } else {
            vocabulary_fixture(&mut rng, 200, 20)
        };
        let report = sweep(&table, &[lex.build()], &paper_grid()).map_err(|e| e.to_string())?;
        ensure!(report.rows.len() == 4, "fixture {i}: expected 4 rows");
        check_trend(&report.rows).map_err(|e| format!("fixture {i}: {e}"))?;
    }
    Ok("60 fixtures, paper grid".into())
}

fn ac3_lexicon_size_effect() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC3);
    for i in 0..50 {
        let (table, big) = vocabulary_fixture(&mut rng, 150, 16);
        let mut small = big.clone();
        small.entries.retain(|_| rng.gen_bool(0.5));
        let (l1, l2) = (small.build(), big.build());
        for t in paper_grid() {
            let a = label_dimensions(&table, &l1, t, false).map_err(|e| e.to_string())?;
            let b = label_dimensions(&table, &l2, t, false).map_err(|e| e.to_string())?;
            let avg = |l: &DimensionLabeling| avg_labels_per_dimension(l, AvgMode::All).unwrap();
            ensure!(
                avg(&b) >= avg(&a),
                "fixture {i} theta {t}: avg labels shrank with larger lexicon"
            );
            ensure!(
                unnamed_ratio(&b) <= unnamed_ratio(&a),
                "fixture {i} theta {t}: unnamed ratio grew with larger lexicon"
            );
        }
    }
    Ok("50 nested lexicon pairs x 4 thetas".into())
}

fn ac4_normalization() -> Outcome {
    const TOL: f64 = 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC4);
    for i in 0..50 {
        let words = rng.gen_range(2..100);
        let dims = rng.gen_range(1..30);
        let mut raw = random_raw_table(&mut rng, words, dims);
        if i % 5 == 0 {
            // one constant column
            let rows: Vec<(String, Vec<f64>)> = raw
                .rows()
                .map(|(w, r)| {
                    let mut r = r.to_vec();
                    r[0] = 4.2;
                    (w.to_owned(), r)
                })
                .collect();
            raw = EmbeddingTable::new(rows).unwrap();
        }
        let norm = normalize(&raw).map_err(|e| e.to_string())?;
        let again = normalize(norm.table()).map_err(|e| e.to_string())?;
        for dim in 0..dims {
            let col = |t: &EmbeddingTable| (0..words).map(|w| t.value(w, dim)).collect::<Vec<_>>();
            let (r, n, n2) = (col(&raw), col(norm.table()), col(again.table()));
            ensure!(
                n.iter().all(|v| (-TOL..=1.0 + TOL).contains(v)),
                "table {i} dim {dim}: out of range"
            );
            let degenerate = r.iter().all(|&v| v == r[0]);
            if degenerate {
                ensure!(
                    n.iter().all(|&v| (v - 0.5).abs() <= TOL),
                    "table {i} dim {dim}: constant dim not 0.5"
                );
                continue;
            }
            let min = n.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = n.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            ensure!(
                min.abs() <= TOL && (max - 1.0).abs() <= TOL,
                "table {i} dim {dim}: extremes {min} {max}"
            );
            for (a, b) in n.iter().zip(&n2) {
                ensure!((a - b).abs() <= TOL, "table {i} dim {dim}: not idempotent");
            }
            for a in 0..words {
                for b in 0..words {
                    if r[a] < r[b] {
                        ensure!(n[a] <= n[b] + TOL, "table {i} dim {dim}: order broken");
                    }
                }
            }
        }
    }
    Ok("50 random tables".into())
}

fn fixture_path(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn ac5_round_trips() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC5);
    let table = random_raw_table(&mut rng, 1000, 50);
    for format in [EmbeddingFormat::Word2VecText, EmbeddingFormat::GloVeText] {
        for precision in [Some(6), None] {
            let mut buf = Vec::new();
            write_embeddings(&table, &mut buf, format, precision).map_err(|e| e.to_string())?;
            let back =
                parse_embeddings(&buf[..], EmbeddingFormat::Auto).map_err(|e| e.to_string())?;
            ensure!(
                back.words() == table.words(),
                "{format:?}: vocabulary differs"
            );
            ensure!(back.dim_count() == 50, "{format:?}: dim count differs");
            let tol = precision.map_or(0.0, |p| 0.5 * 10f64.powi(-(p as i32)) + 1e-12);
            for w in 0..table.len() {
                for d in 0..50 {
                    let diff = (back.value(w, d) - table.value(w, d)).abs();
                    ensure!(
                        diff <= tol,
                        "{format:?} {precision:?}: value ({w},{d}) off by {diff}"
                    );
                }
            }
        }
    }

    let open = |name: &str| BufReader::new(File::open(fixture_path(name)).unwrap());
    let liwc = load_liwc(open("mini.dic")).map_err(|e| e.to_string())?;
    let nrc = load_nrc(open("mini_nrc.txt")).map_err(|e| e.to_string())?;
    let expect = |lex: &Lexicon, word: &str, labels: &[&str]| -> Result<(), String> {
        let got: Vec<&str> = lex.lookup(word).into_iter().collect();
        ensure!(
            got == labels,
            "{} lookup({word}) = {got:?}, expected {labels:?}",
            lex.name()
        );
        Ok(())
    };
    expect(&liwc, "happy", &["affect", "posemo"])?;
    expect(&liwc, "happiness", &["affect", "posemo"])?;
    expect(&liwc, "happ", &["affect", "posemo"])?;
    expect(&liwc, "hap", &[])?;
    expect(&liwc, "hat", &["social"])?;
    expect(&liwc, "hate", &["affect", "negemo"])?;
    expect(&liwc, "hated", &[])?;
    expect(&liwc, "sadness", &["affect", "negemo"])?;
    expect(&liwc, "friendship", &["social"])?;
    expect(&liwc, "Love", &["affect", "posemo", "social"])?;
    expect(&liwc, "table", &[])?;
    expect(&nrc, "abandon", &["fear", "sadness"])?;
    expect(&nrc, "happy", &["joy", "positive"])?;
    expect(&nrc, "friend", &["joy", "trust"])?;
    expect(&nrc, "friendly", &[])?;
    expect(&nrc, "table", &[])?;
    Ok("1000x50 word2vec/glove, liwc + nrc fixtures".into())
}

fn ac6_boundaries() -> Outcome {
    for t in [0.6, 0.75, 0.8, 0.81, 0.79, 0.77, 0.9, 0.51] {
        let th = theta(t);
        let table =
            EmbeddingTable::new([("a", vec![t, 1.0 - t, 0.0]), ("b", vec![1.0 - t, t, 1.0])])
                .unwrap();
        let table = NormalizedEmbeddingTable::from_normalized(table).map_err(|e| e.to_string())?;
        let mut lex = Lexicon::new("b");
        lex.insert_exact("a", "x").unwrap();
        lex.insert_exact("b", "y").unwrap();
        let l = label_dimensions(&table, &lex, th, false).map_err(|e| e.to_string())?;
        ensure!(
            !l.is_named(0) && !l.is_named(1),
            "theta {t}: boundary value labeled"
        );
        ensure!(l.is_named(2), "theta {t}: range ends not labeled");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC6);
    for i in 0..50 {
        let inst = random_instance(&mut rng, 32, 8);
        let l = label_dimensions(&inst.table(), &inst.lexicon.build(), theta(1.0), false)
            .map_err(|e| e.to_string())?;
        ensure!(
            unnamed_ratio(&l) == 1.0,
            "instance {i}: theta 1.0 named a dimension"
        );
    }
    Ok("strict bands at 8 thetas; theta=1.0 on 50 instances".into())
}

fn ac7_filters() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC7);
    for i in 0..100 {
        let inst = random_instance(&mut rng, 32, 8);
        let t = [0.6, 0.75, 0.9][i % 3];
        let l = label_dimensions(&inst.table(), &inst.lexicon.build(), theta(t), true)
            .map_err(|e| e.to_string())?;
        let widest = l.dimensions().iter().map(|d| d.len()).max().unwrap_or(0);
        for limit in 1..=widest + 1 {
            let limit = NonZeroUsize::new(limit).unwrap();
            for f in [cap_labels(&l, limit), top_k_frequent(&l, limit)] {
                ensure!(
                    unnamed_ratio(&f) >= unnamed_ratio(&l),
                    "instance {i}: unnamed ratio fell"
                );
                ensure!(
                    avg_labels_per_dimension(&f, AvgMode::All).unwrap()
                        <= avg_labels_per_dimension(&l, AvgMode::All).unwrap(),
                    "instance {i}: avg (all) rose"
                );
                if let (Ok(a), Ok(b)) = (
                    avg_labels_per_dimension(&f, AvgMode::NamedOnly),
                    avg_labels_per_dimension(&l, AvgMode::NamedOnly),
                ) {
                    ensure!(a <= b, "instance {i}: avg (named) rose");
                }
                for dim in 0..l.dim_count() {
                    for (label, count) in f.dimension(dim) {
                        ensure!(
                            l.dimension(dim).get(label) == Some(count),
                            "instance {i}: count changed"
                        );
                    }
                }
                if limit.get() >= widest {
                    ensure!(f == l, "instance {i}: limit {limit} not identity");
                }
            }
        }
    }
    Ok("100 instances, every limit".into())
}

fn ac8_performance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC8);
    let (words, dims) = (50_000, 300);
    let rows = (0..words).map(|i| {
        let v: Vec<f64> = (0..dims).map(|_| rng.gen_range(-1.0..1.0)).collect();
        (format!("word{i}"), v)
    });
    let table = normalize(&EmbeddingTable::new(rows).unwrap()).map_err(|e| e.to_string())?;

    let labels = [
        "anger",
        "anticipation",
        "disgust",
        "fear",
        "joy",
        "negative",
        "positive",
        "sadness",
        "surprise",
        "trust",
    ];
    let mut lexicon = Lexicon::new("nrc");
    let mut entries = 0;
    while entries < 6_400 {
        let word = format!("word{}", rng.gen_range(0..words * 2));
        lexicon
            .insert_exact(&word, labels.choose(&mut rng).unwrap())
            .unwrap();
        entries = lexicon.len();
    }

    let start = Instant::now();
    let l = label_dimensions(&table, &lexicon, theta(0.75), false).map_err(|e| e.to_string())?;
    let label_time = start.elapsed();
    ensure!(l.dim_count() == dims, "wrong dimension count");
    ensure!(
        label_time < Duration::from_secs(10),
        "labeling took {label_time:?}"
    );

    let start = Instant::now();
    let report =
        sweep(&table, std::slice::from_ref(&lexicon), &paper_grid()).map_err(|e| e.to_string())?;
    let sweep_time = start.elapsed();
    ensure!(report.rows.len() == 4, "wrong sweep row count");
    ensure!(
        sweep_time < Duration::from_secs(40),
        "sweep took {sweep_time:?}"
    );
    Ok(format!("label {label_time:.2?}, sweep {sweep_time:.2?}"))
}

fn ac9_table_rendering() -> Outcome {
    let reported = [
        (0.75, "nrc", 0.118, 378.1),
        (0.81, "liwc", 0.386, 22.2),
        (0.77, "nrc", 0.178, 235.8),
        (0.79, "liwc", 0.306, 41.2),
        (0.81, "nrc", 0.306, 83.3),
        (0.77, "liwc", 0.237, 68.3),
        (0.79, "nrc", 0.237, 145.2),
        (0.75, "liwc", 0.178, 106.5),
    ];
    let mut report = SweepReport {
        rows: reported
            .iter()
            .map(|&(theta, resource, unnamed_ratio, avg)| SweepRow {
                theta,
                resource: resource.into(),
                unnamed_ratio,
                avg_labels_all: avg,
                avg_labels_named: None,
            })
            .collect(),
    };
    report.sort();
    let expected = "theta\tresource\tpct_unnamed\tavg_labels_dim\n\
                    0.81\tliwc\t38.6%\t22.2\n\
                    0.79\tliwc\t30.6%\t41.2\n\
                    0.77\tliwc\t23.7%\t68.3\n\
                    0.75\tliwc\t17.8%\t106.5\n\
                    0.81\tnrc\t30.6%\t83.3\n\
                    0.79\tnrc\t23.7%\t145.2\n\
                    0.77\tnrc\t17.8%\t235.8\n\
                    0.75\tnrc\t11.8%\t378.1\n";
    let rendered = render_sweep_tsv(&report, AvgMode::All);
    ensure!(rendered == expected, "rendered table differs:\n{rendered}");
    report.check_trend().map_err(|e| e.to_string())?;
    Ok("8 rows byte-for-byte".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("AC1 oracle equivalence", ac1_oracle_equivalence),
        ("AC2 theta monotonicity", ac2_theta_monotonicity),
        ("AC3 lexicon size effect", ac3_lexicon_size_effect),
        ("AC4 normalization", ac4_normalization),
        ("AC5 format round-trips", ac5_round_trips),
        ("AC6 boundary semantics", ac6_boundaries),
        ("AC7 filter contract", ac7_filters),
        ("AC8 performance", ac8_performance),
        ("AC9 table rendering", ac9_table_rendering),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome =
            std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".to_owned()));
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(reason) => {
                failed += 1;
                println!("FAIL  {name}: {reason}");
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of {} criteria failed", criteria.len());
        ExitCode::FAILURE
    }
}
