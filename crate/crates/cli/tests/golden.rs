//! Golden JSON reports for the regression corpus.
//!
//! Run with `PLUMBHF_BLESS=1` to rewrite `tests/corpus` and `tests/golden`.

use std::fs;
use std::path::PathBuf;

use plumbhf_cli::{load_graph, run, Command, Settings};
use plumbhf_core::families;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn bless() -> bool {
    std::env::var_os("PLUMBHF_BLESS").is_some_and(|v| v != "0")
}

#[test]
fn corpus_files_match_generator() {
    let dir = root().join("corpus");
    if bless() {
        fs::create_dir_all(&dir).unwrap();
        for (name, graph) in families::corpus() {
            fs::write(dir.join(format!("{name}.graph")), graph.to_string()).unwrap();
        }
    }
    for (name, graph) in families::corpus() {
        let loaded = load_graph(&dir.join(format!("{name}.graph"))).unwrap();
        assert_eq!(loaded, graph, "{name}");
    }
}

#[test]
fn golden_reports() {
    let corpus = root().join("corpus");
    let golden = root().join("golden");
    if bless() {
        fs::create_dir_all(&golden).unwrap();
    }
    let settings = Settings {
        json: true,
        jobs: 2,
        ..Settings::default()
    };
    let mut mismatches = Vec::new();
    let mut compared = 0;
    for (name, graph) in families::corpus() {
        let file = corpus.join(format!("{name}.graph"));
        let unimodular = graph.intersection_form().unwrap().is_unimodular();
        let mut commands = vec![
            ("check", Command::Check { file: file.clone() }),
            ("basics", Command::Basics { file: file.clone() }),
        ];
        if unimodular {
            commands.push(("hf", Command::Hf { file: file.clone() }));
        }
        for (label, command) in commands {
            let got = run(&settings, &command).unwrap().render(true);
            let path = golden.join(format!("{name}.{label}.json"));
            if bless() {
                fs::write(&path, &got).unwrap();
                continue;
            }
            let want = fs::read_to_string(&path)
                .unwrap_or_else(|e| panic!("{}: {e}; run with PLUMBHF_BLESS=1", path.display()));
            if got != want {
                mismatches.push(path.display().to_string());
            }
            compared += 1;
        }
    }
    assert!(mismatches.is_empty(), "golden mismatches: {mismatches:?}");
    assert!(bless() || compared > 30);
}
