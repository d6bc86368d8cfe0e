use mqtm::cli::run_trials;
use mqtm::compiler::{check_conformance, compile, Backend};
use mqtm::machine::{format_machine, parse_machine, RunOptions};
use mqtm::observables::ModelName;
use mqtm::programs::stock_machines;
use mqtm::quantum::{CellId, RegisterState};

fn dir() -> String {
    format!("{}/machines", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn machine_files_match_generators() {
    for (name, m) in stock_machines() {
        let text = std::fs::read_to_string(format!("{}/{name}.mqtm", dir())).unwrap();
        assert_eq!(text, format_machine(&m), "{name}.mqtm is stale");
        assert_eq!(parse_machine(&text).unwrap(), m);
    }
}

#[test]
fn stock_machines_conform_to_their_models() {
    let expect = [
        ("transfer", ModelName::F),
        ("teleport", ModelName::D),
        ("bell_prep", ModelName::D),
        ("write0", ModelName::C),
        ("increment3", ModelName::C),
        ("bitflip", ModelName::C),
        ("loop", ModelName::C),
        ("pair_xx", ModelName::A),
        ("jumps", ModelName::F),
    ];
    let all = stock_machines();
    for (name, model) in expect {
        let m = &all.iter().find(|(n, _)| *n == name).unwrap().1;
        assert!(check_conformance(m, model).is_empty(), "{name}");
    }
}

#[test]
fn trials_agree_with_exact_distribution() {
    for (name, m) in stock_machines() {
        if name == "loop" || name == "write0" {
            continue;
        }
        let n = m.output().width.min(1);
        let cells: Vec<CellId> = m.input_cells(n);
        let input = if name == "bell_prep" {
            RegisterState::empty()
        } else {
            RegisterState::basis(cells, &vec![true; n]).unwrap()
        };
        let opts = RunOptions::with_max_steps(16);
        let stats = run_trials(&m, &input, 2000, 11, &opts, 1 << 16).unwrap();
        let rows = stats.exact.unwrap_or_else(|| panic!("{name}: no exact distribution"));
        for r in rows {
            assert!(r.deviation_sigmas <= 5.0 || r.exact < 1e-3, "{name}: {r:?}");
        }
    }
}

#[test]
fn pair_machine_compiles_along_every_route() {
    let m = stock_machines().into_iter().find(|(n, _)| *n == "pair_xx").unwrap().1;
    for (to, backend) in [
        (ModelName::F, Backend::Transfer),
        (ModelName::D, Backend::Teleport),
        (ModelName::G, Backend::Transfer),
    ] {
        let (out, report) = compile(&m, ModelName::A, to, backend).unwrap();
        assert!(check_conformance(&out, to).is_empty(), "{to}");
        assert_eq!(report.state_count_after, out.states().len());
        assert!(report.inserted_gadget_count > 0);
    }
    assert!(compile(&m, ModelName::A, ModelName::G, Backend::Teleport).is_err());
}
