use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vnfab::designs::*;
use vnfab::dynlogic::{Netlist, PhaseSchedule, Simulator};

fn run_words(nl: &Netlist, cases: &[(u64, u64, bool)]) -> Vec<Vec<bool>> {
    let vectors: Vec<Vec<bool>> = cases
        .iter()
        .map(|&(a, b, cin)| {
            dual_inputs(nl, |n| {
                if n == "cin" {
                    Some(cin)
                } else {
                    bus_bit(n, "a", a).or_else(|| bus_bit(n, "b", b))
                }
            })
            .expect("all inputs named")
        })
        .collect();
    Simulator::new(nl, PhaseSchedule::dual(nl.stages))
        .run_vectors(&vectors)
        .unwrap()
}

fn check_cla(width: usize, cases: &[(u64, u64, bool)]) {
    let nl = gen_cla(ClaSpec::new(width).unwrap()).unwrap();
    assert!(nl.max_fan_in() <= 8);
    let cout = nl
        .outputs
        .iter()
        .position(|&o| nl.name(o) == "cout")
        .unwrap();
    for (out, &(a, b, cin)) in run_words(&nl, cases).iter().zip(cases) {
        let total = a + b + cin as u64;
        let sum = bus_word(&nl, out, "s");
        assert_eq!(sum, total & ((1 << width) - 1), "{a}+{b}+{cin}");
        assert_eq!(out[cout], total >> width == 1);
    }
}

#[test]
fn cla4_exhaustive() {
    let cases: Vec<_> = (0..16)
        .flat_map(|a| (0..16).flat_map(move |b| [(a, b, false), (a, b, true)]))
        .collect();
    check_cla(4, &cases);
}

#[test]
fn cla8_and_cla16_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for width in [8usize, 16] {
        let mask = (1u64 << width) - 1;
        let mut cases: Vec<_> = (0..10_000)
            .map(|_| (rng.gen::<u64>() & mask, rng.gen::<u64>() & mask, rng.gen()))
            .collect();
        cases.push((mask, 0, true));
        cases.push((mask, mask, true));
        check_cla(width, &cases);
    }
}

#[test]
fn multiplier_exhaustive() {
    let nl = gen_multiplier4().unwrap();
    assert_eq!(nl.output_stage(), Some(MULTIPLIER_OUTPUT_STAGE as usize));
    let cases: Vec<_> = (0..16)
        .flat_map(|a| (0..16).map(move |b| (a, b, false)))
        .collect();
    for (out, &(a, b, _)) in run_words(&nl, &cases).iter().zip(&cases) {
        assert_eq!(bus_word(&nl, out, "p"), a * b);
    }
}

#[test]
fn decoder_and_rom() {
    for n in 2..=4 {
        let nl = gen_decoder(n).unwrap();
        let vectors: Vec<_> = (0..1u64 << n)
            .map(|k| dual_inputs(&nl, |s| bus_bit(s, "x", k)).unwrap())
            .collect();
        let outs = Simulator::new(&nl, PhaseSchedule::dual(nl.stages))
            .run_vectors(&vectors)
            .unwrap();
        for (k, out) in outs.iter().enumerate() {
            assert_eq!(bus_word(&nl, out, "y"), 1 << k);
        }
    }
    let words: Vec<Vec<bool>> = (0..16u64)
        .map(|w| (0..9).map(|b| (w * 37 + 5) >> b & 1 == 1).collect())
        .collect();
    let nl = gen_rom(&words).unwrap();
    let vectors: Vec<_> = (0..16)
        .map(|k| dual_inputs(&nl, |s| bus_bit(s, "x", k)).unwrap())
        .collect();
    let outs = Simulator::new(&nl, PhaseSchedule::dual(nl.stages))
        .run_vectors(&vectors)
        .unwrap();
    for (k, out) in outs.iter().enumerate() {
        assert_eq!(bus_word(&nl, out, "d"), (k as u64 * 37 + 5) & 0x1FF);
    }
    assert!(matches!(
        gen_rom(&vec![vec![true; 9]; 17]),
        Err(DesignError::Capacity { .. })
    ));
}

#[test]
fn nwram_write_read_and_restore() {
    let (nl, mut cell) = gen_nwram().unwrap();
    assert!(nl.self_timed);
    for v in [true, false, true] {
        cell.write(v).unwrap();
        assert_eq!(cell.stored(), Some(v));
        assert_eq!(cell.read().unwrap(), v);
        assert_eq!(cell.read().unwrap(), v, "read is non-destructive");
        cell.idle().unwrap();
        cell.restore().unwrap();
        assert_eq!(cell.stored(), Some(v));
    }
    let bad = NwramControls {
        xeve: true,
        yeve: true,
        ..Default::default()
    };
    assert!(matches!(cell.apply(bad), Err(DesignError::Protocol(_))));
}

fn asm(text: &str) -> RomImage {
    RomImage::from_asm(text).unwrap()
}

fn compare_with_reference(rom: &RomImage, instructions: usize) {
    let m = WispMachine::new(*rom).unwrap();
    let snaps = m.run(WispMachine::pulses_to_retire(instructions)).unwrap();
    for s in &snaps {
        let k = s.retired();
        let reference = wisp_reference(rom, k).unwrap();
        assert_eq!(s.architectural(rom), reference, "after pulse {}", s.pulse);
        assert_eq!(s.fetch_pc as usize, s.pulse % 16);
    }
}

#[test]
fn wisp_pipeline_matches_reference() {
    let rom = asm(
        "MOVI R2, #9\nMOVI R3, #11\nNOP\nNOP\nMOV R0, R3\nADD R3, R2\nMOVI R1, #7\nNOP\nNOP\nMULT R1, R0\nNOP\nNOP\nADD R1, R2",
    );
    let m = WispMachine::new(rom).unwrap();
    assert_eq!(m.design.macro_cycle, 3);
    compare_with_reference(&rom, 16);
    let end = wisp_reference(&rom, 13).unwrap();
    assert_eq!(end.product, 77);
    assert_eq!(end.regs, [11, 6, 9, 4]);
}

#[test]
fn wisp_hazard_needs_two_nops() {
    let with = |nops: usize| {
        let mut text = String::from("MOVI R0, #5\n");
        text += &"NOP\n".repeat(nops);
        text += "ADD R0, R0\n";
        let rom = asm(&text);
        let n = nops + 2;
        let snaps = WispMachine::new(rom)
            .unwrap()
            .run(WispMachine::pulses_to_retire(n))
            .unwrap();
        snaps.last().unwrap().regs[0]
    };
    assert_eq!(with(REQUIRED_NOPS), 10);
    assert_ne!(with(REQUIRED_NOPS - 1), 10);
}
