use raspvisor::fixtures::BB1;
use raspvisor::hypervisor::{collect_histogram, run_batch, BatchConfig, VmStatus};
use raspvisor::lang::parse_source;
use raspvisor::lower::lower;
use raspvisor::sampler::Sampler;
use raspvisor::verify::check_schedule_independence;
use raspvisor::vm::{init_config, run_to_fixpoint, Config, MachineParams, Program};
use raspvisor::workload::{sampled_workload, Inputs};
use raspvisor::Error;

fn mixed_batch(p: &MachineParams) -> Vec<Config<u32>> {
    let bb = lower::<u32>(&parse_source(BB1).unwrap(), p).unwrap().0;
    [Program::new(vec![0, 0]).unwrap(), Program::new(vec![1, 5, 4, 6, 0, 0]).unwrap(), bb]
        .iter()
        .map(|prog| init_config(prog, &[], p).unwrap())
        .collect()
}

#[test]
fn empty_batch() {
    let r = run_batch::<u32>(Vec::new(), &MachineParams::default(), &BatchConfig::default()).unwrap();
    assert!(r.slots.is_empty());
    assert_eq!(r.histogram.total(), 0);
}

#[test]
fn mixed_batch_matches_serial_runs() {
    let p = MachineParams::default();
    let configs = mixed_batch(&p);
    let bb_tau = run_to_fixpoint(configs[2].clone(), 100_000, &p).tau_h.unwrap();
    let r = run_batch(configs, &p, &BatchConfig::new(100_000, 7, 2)).unwrap();
    let taus: Vec<_> = r.slots.iter().map(|s| s.tau_h).collect();
    assert_eq!(taus, vec![Some(0), Some(2), Some(bb_tau)]);
    assert_eq!(r.histogram.buckets[0], 1);
    assert_eq!(r.histogram.buckets[2], 1);
    assert_eq!(r.histogram.tail, 1);
    assert_eq!(r.histogram.nonhalt, 0);
    assert_eq!(collect_histogram(&r.slots), r.histogram);
}

#[test]
fn budget_boundaries() {
    let p = MachineParams::default();
    // the three-pair program halts after exactly two steps
    let c = mixed_batch(&p).swap_remove(1);
    for (tau_max, halted) in [(0, false), (1, false), (2, true), (3, true)] {
        for epoch in [1, 2, 64] {
            let r = run_batch(vec![c.clone()], &p, &BatchConfig::new(tau_max, epoch, 1)).unwrap();
            let slot = &r.slots[0];
            assert_eq!(slot.status == VmStatus::Halted, halted, "tau_max={tau_max} q={epoch}");
            assert_eq!(slot.steps_taken, tau_max.min(2));
        }
    }
    let r = run_batch(vec![mixed_batch(&p).remove(0)], &p, &BatchConfig::new(0, 1, 1)).unwrap();
    assert_eq!(r.slots[0].tau_h, Some(0));
}

#[test]
fn no_lost_work() {
    let p = MachineParams::default();
    // LOD 1 ; BNZ 0 alternates between two configurations forever
    let spin = init_config(&Program::<u32>::new(vec![1, 1, 5, 0]).unwrap(), &[], &p).unwrap();
    for epoch in [1, 3, 64, 1000] {
        let r = run_batch(vec![spin.clone(); 10], &p, &BatchConfig::new(500, epoch, 3)).unwrap();
        assert!(r.slots.iter().all(|s| s.status == VmStatus::BudgetExhausted));
        assert_eq!(r.slots.iter().map(|s| s.steps_taken).sum::<u64>(), 10 * 500);
        assert_eq!(r.histogram.nonhalt, 10);
    }
}

#[test]
fn schedule_independence_on_sampled_programs() {
    let p = MachineParams::default();
    let w = sampled_workload::<u32>(&Sampler::new(100).unwrap(), 0, 500, 5, Inputs::Random, &p).unwrap();
    let grid: Vec<_> = [1, 4, 16].into_iter().flat_map(|g| [1, 7, 64].map(|q| (g, q))).collect();
    assert!(check_schedule_independence(&w.configs, &p, 3000, &grid).unwrap());
}

#[test]
fn rejects_bad_batches() {
    let p = MachineParams::default();
    let configs = mixed_batch(&p);
    assert!(matches!(run_batch(configs.clone(), &p, &BatchConfig::new(10, 0, 1)), Err(Error::Params(_))));
    let tight = BatchConfig {
        max_words: 2 * p.config_words(),
        ..BatchConfig::new(10, 1, 1)
    };
    assert!(matches!(run_batch(configs.clone(), &p, &tight), Err(Error::Capacity { .. })));
    let mut bad = configs;
    bad[1].mem.pop();
    assert!(run_batch(bad, &p, &BatchConfig::new(10, 1, 1)).is_err());
}
