use raspvisor::lang::parse_source;
use raspvisor::lower::lower;
use raspvisor::sampler::Sampler;
use raspvisor::vm::MachineParams;
use raspvisor::workload::{sampled_workload, Inputs};
use raspvisor::Error;

#[test]
fn nested_halts_can_exceed_default_memory() {
    // 98 tokens; every hlt expands to nine PRIs and a halt pair
    let src = "fun f0 ( ipt : W ^ 9 ) -> W ^ 9 { ife ipt[0] { ife ipt[0] { ife ipt[0] { hlt } { hlt } } { ife ipt[0] { hlt } { hlt } } } { ife ipt[0] { ife ipt[0] { hlt } { hlt } } { ife ipt[0] { hlt } { ife ipt[0] { hlt } { hlt } } } } ; hlt }";
    let f = parse_source(src).unwrap();
    assert_eq!(f.token_len(), 98);
    let err = lower::<u32>(&f, &MachineParams::default()).unwrap_err();
    assert!(matches!(err, Error::Capacity { .. }), "{err}");
}

#[test]
fn sampled_capacity_violations_are_rare_and_reported() {
    // exact rate at L = 100 under the default machine is about 2.4e-5
    let p = MachineParams::default();
    for len in [16, 30, 60] {
        let w = sampled_workload::<u32>(&Sampler::new(len).unwrap(), 0, 5000, 1, Inputs::Zero, &p).unwrap();
        assert!(w.aborted.is_empty(), "L={len}: {:?}", w.aborted);
    }
    let w = sampled_workload::<u32>(&Sampler::new(100).unwrap(), 0, 20_000, 1, Inputs::Zero, &p).unwrap();
    assert!(w.aborted.len() <= 5, "{:?}", w.aborted);
    assert_eq!(w.configs.len() + w.aborted.len(), 20_000);
    assert!(w.aborted.iter().all(|a| a.reason.contains("capacity") || a.reason.contains("needs")));
}
