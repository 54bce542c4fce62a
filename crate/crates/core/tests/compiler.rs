use proptest::prelude::*;
use raspvisor::lang::parse_source;
use raspvisor::lower::{lower, RESERVED_WORDS};
use raspvisor::oracle::{eval, OracleStatus};
use raspvisor::sampler::{sample_inputs, Sampler};
use raspvisor::verify::check_compiler;
use raspvisor::vm::{init_config, run_to_fixpoint, MachineParams};

#[test]
fn sampled_programs_agree_with_the_evaluator() {
    let p = MachineParams::default();
    let r = check_compiler::<u32>(&[16, 21, 30, 45, 60, 100], 300, 21, 10_000, 10_000, &p, lower).unwrap();
    assert!(r.passed(), "{r:?}");
    assert!(r.compared > 1000, "{r:?}");
}

#[test]
fn narrow_words_agree_with_the_evaluator() {
    // w = 8 forces wrapping on almost every multiplication
    let p = MachineParams::new(8, 250, 10, 2, 10).unwrap();
    let r = check_compiler::<u8>(&[30, 60], 300, 4, 10_000, 10_000, &p, lower).unwrap();
    assert!(r.passed(), "{r:?}");
}

#[test]
fn wider_outputs_than_buffer() {
    // every declared output is printed, only the first s reach y
    let p = MachineParams::default();
    let f = parse_source("fun f0 ( ipt : W ^ 2 ) -> W ^ 3 { opt[0] = ipt[1] ; opt[1] = ipt[0] + 1 ; opt[2] = 5 }").unwrap();
    let (prog, layout) = lower::<u32>(&f, &p).unwrap();
    assert_eq!(layout.opt_cap, 3);
    assert_eq!(layout.nu, 2 * layout.m);
    assert_eq!(layout.ipt_base, 2 * layout.m + RESERVED_WORDS);
    let run = run_to_fixpoint(init_config(&prog, &[4, 9], &p).unwrap(), 1000, &p);
    assert_eq!(run.last.outputs(), &[9, 5]);
    assert_eq!(eval::<u32>(&f, &[4, 9], 100, &p).opt, vec![9, 5, 5]);
}

#[test]
fn missing_inputs_read_as_zero() {
    let p = MachineParams::default();
    let f = parse_source("fun f0 ( ipt : W ^ 3 ) -> W ^ 1 { opt[0] = ipt[2] + 4 }").unwrap();
    let (prog, _) = lower::<u32>(&f, &p).unwrap();
    let run = run_to_fixpoint(init_config(&prog, &[1], &p).unwrap(), 1000, &p);
    assert_eq!(run.last.outputs(), &[4]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn more_fuel_never_changes_a_halted_result(seed in any::<u64>(), extra in 1u64..5000) {
        let p = MachineParams::default();
        let f = Sampler::new(60).unwrap().sample(seed, 0);
        let x: Vec<u32> = sample_inputs(f.inputs as usize, p.w, seed, 0);
        let short = eval(&f, &x, 2000, &p);
        let long = eval(&f, &x, 2000 + extra, &p);
        if short.status == OracleStatus::Halted {
            prop_assert_eq!(short, long);
        } else {
            prop_assert!(long.dsl_steps >= short.dsl_steps);
        }
    }

    #[test]
    fn vm_runs_are_prefix_consistent(seed in any::<u64>(), cut in 0u64..400) {
        // stopping early and resuming gives the same trajectory
        let p = MachineParams::default();
        let f = Sampler::new(45).unwrap().sample(seed, 1);
        let (prog, _) = lower::<u32>(&f, &p).unwrap();
        let c0 = init_config(&prog, &sample_inputs::<u32>(f.inputs as usize, p.w, seed, 1), &p).unwrap();
        let whole = run_to_fixpoint(c0.clone(), 800, &p);
        let first = run_to_fixpoint(c0, cut, &p);
        let rest = run_to_fixpoint(first.last.clone(), 800 - cut, &p);
        prop_assert_eq!(&whole.last, &rest.last);
        match first.tau_h {
            Some(t) => prop_assert_eq!(whole.tau_h, Some(t)),
            None => prop_assert_eq!(whole.tau_h, rest.tau_h.map(|t| t + cut)),
        }
    }
}
