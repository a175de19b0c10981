use std::path::Path;

use subseg::pipeline::{rows_to_tsv, run_pipeline_into, sweep, PipelineConfig, Scheme};

fn sample() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/sample_10k.txt")
}

fn toy(dir: &Path) -> std::path::PathBuf {
    let text: String = std::fs::read_to_string(sample()).unwrap().lines().take(300).map(|l| format!("{l}\n")).collect();
    let path = dir.join("toy.txt");
    std::fs::write(&path, text).unwrap();
    path
}

fn bpe(input: &Path, merges: usize) -> PipelineConfig {
    let mut c = PipelineConfig::new(Scheme::Bpe, input);
    c.merges = Some(merges);
    c
}

#[test]
fn merge_grid_is_monotone_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let input = toy(dir.path());
    let grid: Vec<_> = [10, 20, 30]
        .iter()
        .map(|&m| (format!("m{m}"), Ok(bpe(&input, m))))
        .collect();
    let rows = sweep(&grid, &dir.path().join("a"));
    assert!(rows.iter().all(|r| r.is_ok()));
    let sizes: Vec<usize> = rows.iter().map(|r| r.vocab_size.unwrap()).collect();
    assert!(sizes.windows(2).all(|w| w[0] <= w[1]), "{sizes:?}");

    let again = sweep(&grid, &dir.path().join("b"));
    assert_eq!(rows_to_tsv(&rows), rows_to_tsv(&again));
    for name in ["m10", "m20", "m30"] {
        let a = std::fs::read(dir.path().join("a").join(name).join("manifest.txt")).unwrap();
        let b = std::fs::read(dir.path().join("b").join(name).join("manifest.txt")).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn invalid_row_does_not_stop_the_grid() {
    let dir = tempfile::tempdir().unwrap();
    let input = toy(dir.path());
    let mut broken = PipelineConfig::new(Scheme::Os, &input);
    broken.script = Some("no-such-script".into());
    let grid = vec![
        ("a".to_owned(), Ok(bpe(&input, 5))),
        ("b".to_owned(), Ok(broken)),
        ("c".to_owned(), Ok(PipelineConfig::new(Scheme::Char, &input))),
    ];
    let rows = sweep(&grid, dir.path());
    assert!(rows[0].is_ok() && rows[2].is_ok());
    assert!(!rows[1].is_ok());
    assert!(rows_to_tsv(&rows).lines().nth(2).unwrap().contains("failed"));
}

#[test]
fn target_vocab_matches_orthographic_vocabulary() {
    let dir = tempfile::tempdir().unwrap();
    let input = toy(dir.path());
    let mut os = PipelineConfig::new(Scheme::Os, &input);
    os.script = Some("latin".into());
    let os_out = run_pipeline_into(&os, &dir.path().join("os")).unwrap();

    let mut matched = PipelineConfig::new(Scheme::Bpe, &input);
    matched.target_vocab = Some(os_out.vocab_size);
    let bpe_out = run_pipeline_into(&matched, &dir.path().join("bpe")).unwrap();
    assert!(bpe_out.vocab_size >= os_out.vocab_size);
    let merges = bpe_out.merges_learned.unwrap();
    assert!(merges > 0);

    // One merge fewer must fall short of the target.
    let fewer = run_pipeline_into(&bpe(&input, merges - 1), &dir.path().join("fewer")).unwrap();
    assert!(fewer.vocab_size < os_out.vocab_size);
    assert!(bpe_out.manifest.contains(&format!("result.target_vocab={}", os_out.vocab_size)));
}
