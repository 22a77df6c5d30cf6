use nlrefute::datagen::*;
use nlrefute::engine::*;
use nlrefute::nl::*;
use nlrefute::normal::*;
use std::time::Instant;
fn main() {
    let lex = Lexicon::default();
    let config = GenConfig { n_instances: 60, ..Default::default() };
    let t = Instant::now();
    let mut worst = 0.0f64;
    for inst in generate(&config, &lex).unwrap() {
        let inst = inst.unwrap();
        let theory: Vec<Formula> = inst.theory.iter().map(|s| parse_sentence(s, &lex).unwrap()).collect();
        let hyp = parse_sentence(&inst.hypothesis, &lex).unwrap();
        let sets = build_theory_sets(&theory, &hyp).unwrap();
        for (name, mut s) in [("t1", sets.t1.clone()), ("t2", sets.t2.clone())] {
            for strat in [Strategy::SosLinear, Strategy::Unrestricted] {
                let t0 = Instant::now();
                let r = refute(&mut s.clone(), &RefuteConfig::new(strat, 100));
                let dt = t0.elapsed().as_secs_f64();
                if dt > 0.05 { println!("{} {name} {strat} {:.3}s refuted={} steps={} inf={} halt={}", inst.id, dt, r.refuted, r.steps_used, r.inferences, r.halt_reason.as_str()); }
                worst = worst.max(dt);
                let _ = &mut s;
            }
        }
    }
    println!("total {:.2}s worst {:.3}", t.elapsed().as_secs_f64(), worst);
}
