//! Code-length test statistics, decisions and batteries.
//!
//! A code that maps an n-bit word to |f(x)| bits yields the statistic
//! tau = n - |f(x)|. Because a prefix-free code has fewer than 2^(L+1)
//! codewords of length at most L, rejecting when tau >= log2(1/alpha) + 1
//! rejects at most alpha * 2^n words, which is the level guarantee. A battery
//! splits its budget alpha across members with weights omega_i summing to at
//! most 1 and rejects when any member rejects.

use serde::{Deserialize, Serialize};

use crate::krichevsky::blockwise_codelength;
use crate::lz77::codelength_lz;
use crate::mixture::{blockwise_codelength_rho, MixtureWeights, DEFAULT_MAX_ORDER_CAP};

/// Outcome vocabulary of a single test or a battery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Random,
    NonRandom,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Random => "random",
            Verdict::NonRandom => "non-random",
        })
    }
}

/// Which code a test runs, with its parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "code", rename_all = "kebab-case")]
pub enum CodeSpec {
    /// Blockwise Krichevsky code of the given memory.
    Krichevsky { memory: usize, block_len: usize },
    /// Blockwise twice-universal mixture over memories 0..=max_order.
    Mixture { max_order: usize, block_len: usize },
    /// LZ77 dictionary code over the whole input.
    Lz77,
}

impl CodeSpec {
    pub fn name(&self) -> String {
        match self {
            CodeSpec::Krichevsky { memory, block_len } => {
                format!("krichevsky[m={memory},t={block_len}]")
            }
            CodeSpec::Mixture {
                max_order,
                block_len,
            } => format!("mixture[M={max_order},t={block_len}]"),
            CodeSpec::Lz77 => "lz77".to_string(),
        }
    }

    /// Code length of `bits` under this code.
    pub fn codelength(&self, bits: &[u8]) -> u64 {
        match self {
            CodeSpec::Krichevsky { memory, block_len } => {
                blockwise_codelength(bits, *memory, *block_len)
            }
            CodeSpec::Mixture {
                max_order,
                block_len,
            } => blockwise_codelength_rho(
                bits,
                &MixtureWeights::default_weights(*max_order),
                *block_len,
            ),
            CodeSpec::Lz77 => codelength_lz(bits),
        }
    }
}

/// The decision of one test on one input at one significance level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestDecision {
    pub test_name: String,
    pub code: CodeSpec,
    pub n: usize,
    pub codelength: u64,
    pub tau: i64,
    /// Level used by this test (for a battery member, alpha * omega_i).
    pub alpha: f64,
    pub threshold: f64,
    /// Upper bound on the p-value: reports read it as "p <= ...".
    pub p_bound: f64,
    pub verdict: Verdict,
}

/// tau_f = n - |f(x)|; negative when the code expands the input.
pub fn statistic_tau(n: usize, codelength: u64) -> i64 {
    n as i64 - codelength as i64
}

/// Threshold, p-value bound and verdict for a statistic value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decision {
    pub threshold: f64,
    pub p_bound: f64,
    pub verdict: Verdict,
}

/// Rejects when tau >= log2(1/alpha) + 1. The p-value bound is
/// min(1, 2^-(tau-1)).
pub fn decide(tau: i64, alpha: f64) -> Decision {
    assert!(
        alpha > 0.0 && alpha < 1.0,
        "significance level must lie in (0,1), got {alpha}"
    );
    let threshold = (1.0 / alpha).log2() + 1.0;
    let verdict = if tau as f64 >= threshold {
        Verdict::NonRandom
    } else {
        Verdict::Random
    };
    // Clamped to the smallest positive float so the bound stays in (0,1]
    // even when 2^-(tau-1) underflows.
    let p_bound = if tau <= 0 {
        1.0
    } else {
        (-(tau as f64 - 1.0)).exp2().clamp(f64::MIN_POSITIVE, 1.0)
    };
    Decision {
        threshold,
        p_bound,
        verdict,
    }
}

/// Runs a single code-length test on a non-empty input.
pub fn run_test(bits: &[u8], code: &CodeSpec, alpha: f64) -> TestDecision {
    assert!(!bits.is_empty(), "cannot test the empty word");
    let n = bits.len();
    let codelength = code.codelength(bits);
    let tau = statistic_tau(n, codelength);
    let decision = decide(tau, alpha);
    TestDecision {
        test_name: code.name(),
        code: code.clone(),
        n,
        codelength,
        tau,
        alpha,
        threshold: decision.threshold,
        p_bound: decision.p_bound,
        verdict: decision.verdict,
    }
}

/// omega_i = 1/(i(i+1)) for i = 1..=n; the sum telescopes to 1 - 1/(n+1).
pub fn default_weights(n: usize) -> Vec<f64> {
    assert!(n >= 1, "a battery needs at least one member");
    (1..=n).map(|i| 1.0 / (i as f64 * (i + 1) as f64)).collect()
}

/// A battery: ordered member tests with a significance budget. Member i runs
/// at level alpha * weights[i]; the battery rejects when any member rejects,
/// so its overall level is at most alpha * sum(weights) <= alpha.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatteryConfig {
    pub alpha: f64,
    pub members: Vec<CodeSpec>,
    pub weights: Vec<f64>,
}

impl BatteryConfig {
    pub fn new(alpha: f64, members: Vec<CodeSpec>, weights: Vec<f64>) -> Self {
        assert!(
            alpha > 0.0 && alpha < 1.0,
            "significance level must lie in (0,1), got {alpha}"
        );
        assert!(!members.is_empty(), "a battery needs at least one member");
        assert_eq!(members.len(), weights.len(), "one weight per member");
        assert!(weights.iter().all(|&w| w > 0.0), "weights must be positive");
        let sum: f64 = weights.iter().sum();
        assert!(
            sum <= 1.0 + 1e-12,
            "weights must sum to at most 1, got {sum}"
        );
        BatteryConfig {
            alpha,
            members,
            weights,
        }
    }

    /// Level alpha_i = alpha * omega_i of member i.
    pub fn member_alpha(&self, i: usize) -> f64 {
        self.alpha * self.weights[i]
    }

    /// Guaranteed overall level: sum of the member levels.
    pub fn alpha_budget(&self) -> f64 {
        self.alpha * self.weights.iter().sum::<f64>()
    }
}

/// The member composition the default battery applies to an n-bit input:
/// Krichevsky tests with memories {0, 1, 2, ceil(log2 log2 n),
/// ceil(sqrt(log2 n))} (deduplicated, ascending), then the mixture test, then
/// LZ77. Block length is min(n, 2^14). Defined for n >= 4.
pub fn standard_members(n: usize) -> Vec<CodeSpec> {
    assert!(n >= 4, "composition rule needs n >= 4");
    let log_n = (n as f64).log2();
    let mut memories = vec![0usize, 1, 2];
    memories.push(log_n.log2().ceil() as usize);
    memories.push(log_n.sqrt().ceil() as usize);
    memories.sort_unstable();
    memories.dedup();
    let block_len = n.min(1 << 14);
    let mut members: Vec<CodeSpec> = memories
        .into_iter()
        .map(|memory| CodeSpec::Krichevsky { memory, block_len })
        .collect();
    members.push(CodeSpec::Mixture {
        max_order: DEFAULT_MAX_ORDER_CAP.min(block_len.ilog2() as usize),
        block_len,
    });
    members.push(CodeSpec::Lz77);
    members
}

/// Minimum input length accepted by [`default_battery`].
pub const DEFAULT_BATTERY_MIN_N: usize = 64;

/// The recommended battery for an n-bit input at level alpha, with the
/// telescoping weights assigned in member order.
pub fn default_battery(n: usize, alpha: f64) -> BatteryConfig {
    assert!(
        n >= DEFAULT_BATTERY_MIN_N,
        "default battery needs at least {DEFAULT_BATTERY_MIN_N} bits, got {n}"
    );
    let members = standard_members(n);
    let weights = default_weights(members.len());
    BatteryConfig::new(alpha, members, weights)
}

/// Every member decision plus the battery verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatteryReport {
    pub alpha: f64,
    /// Union-bound guarantee actually used: sum of member levels.
    pub alpha_budget: f64,
    pub weights: Vec<f64>,
    pub decisions: Vec<TestDecision>,
    pub verdict: Verdict,
}

/// Runs every member at its budgeted level; the battery rejects iff at least
/// one member rejects.
pub fn run_battery(bits: &[u8], config: &BatteryConfig) -> BatteryReport {
    let decisions: Vec<TestDecision> = config
        .members
        .iter()
        .enumerate()
        .map(|(i, code)| run_test(bits, code, config.member_alpha(i)))
        .collect();
    let verdict = if decisions.iter().any(|d| d.verdict == Verdict::NonRandom) {
        Verdict::NonRandom
    } else {
        Verdict::Random
    };
    BatteryReport {
        alpha: config.alpha,
        alpha_budget: config.alpha_budget(),
        weights: config.weights.clone(),
        decisions,
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_is_plain_difference() {
        assert_eq!(statistic_tau(5, 7), -2);
        assert_eq!(statistic_tau(100, 100), 0);
        assert_eq!(statistic_tau(131068, 78641), 52427);
    }

    #[test]
    fn decision_rule_at_eighth() {
        let d = decide(4, 0.125);
        assert_eq!(d.threshold, 4.0);
        assert_eq!(d.verdict, Verdict::NonRandom);
        assert!((d.p_bound - 0.125).abs() < 1e-15);
        let d = decide(3, 0.125);
        assert_eq!(d.verdict, Verdict::Random);
    }

    #[test]
    fn p_bound_saturates_at_one() {
        assert_eq!(decide(0, 0.01).p_bound, 1.0);
        assert_eq!(decide(-50, 0.01).p_bound, 1.0);
        assert_eq!(decide(1, 0.01).p_bound, 1.0);
    }

    #[test]
    #[should_panic(expected = "significance level")]
    fn alpha_must_be_in_unit_interval() {
        decide(3, 1.5);
    }

    #[test]
    #[should_panic(expected = "empty word")]
    fn run_test_rejects_empty_input() {
        run_test(&[], &CodeSpec::Lz77, 0.01);
    }

    #[test]
    fn exhaustive_level_guarantee_memoryless() {
        // Over all 12-bit words, the kappa_0 test rejects at most alpha 2^12
        // words for a ladder of levels.
        let n = 12usize;
        let code = CodeSpec::Krichevsky {
            memory: 0,
            block_len: n,
        };
        for exp in 2..=8u32 {
            let alpha = 0.5f64.powi(exp as i32);
            let mut rejected = 0u64;
            let mut bits = vec![0u8; n];
            for word in 0u64..(1 << n) {
                for (j, b) in bits.iter_mut().enumerate() {
                    *b = ((word >> (n - 1 - j)) & 1) as u8;
                }
                if run_test(&bits, &code, alpha).verdict == Verdict::NonRandom {
                    rejected += 1;
                }
            }
            let budget = (alpha * (1u64 << n) as f64).floor() as u64;
            assert!(rejected <= budget, "alpha=2^-{exp}: {rejected} > {budget}");
        }
    }

    #[test]
    fn rejection_regions_nest_across_levels() {
        // If a word is rejected at a smaller alpha it is rejected at the
        // larger one: thresholds are monotone in alpha for a fixed statistic.
        let n = 12usize;
        let code = CodeSpec::Krichevsky {
            memory: 0,
            block_len: n,
        };
        let mut bits = vec![0u8; n];
        for word in 0u64..(1 << n) {
            for (j, b) in bits.iter_mut().enumerate() {
                *b = ((word >> (n - 1 - j)) & 1) as u8;
            }
            let strict = run_test(&bits, &code, 1.0 / 64.0).verdict;
            let loose = run_test(&bits, &code, 1.0 / 4.0).verdict;
            if strict == Verdict::NonRandom {
                assert_eq!(loose, Verdict::NonRandom);
            }
        }
    }

    #[test]
    fn default_weights_telescope() {
        let w = default_weights(3);
        assert_eq!(w.len(), 3);
        assert!((w[0] - 0.5).abs() < 1e-15);
        assert!((w[1] - 1.0 / 6.0).abs() < 1e-15);
        assert!((w[2] - 1.0 / 12.0).abs() < 1e-15);
        assert!((w.iter().sum::<f64>() - 0.75).abs() < 1e-12);
        assert_eq!(default_weights(1), vec![0.5]);
        for n in 1..=40 {
            let sum: f64 = default_weights(n).iter().sum();
            assert!((sum - (1.0 - 1.0 / (n as f64 + 1.0))).abs() < 1e-12);
        }
    }

    #[test]
    fn standard_members_for_known_lengths() {
        let members = standard_members(1 << 20);
        let memories: Vec<usize> = members
            .iter()
            .filter_map(|m| match m {
                CodeSpec::Krichevsky { memory, .. } => Some(*memory),
                _ => None,
            })
            .collect();
        assert_eq!(memories, vec![0, 1, 2, 5]);
        assert_eq!(members.len(), 6);
        assert!(
            matches!(members[4], CodeSpec::Mixture { max_order: 12, block_len } if block_len == 1 << 14)
        );
        assert!(matches!(members[5], CodeSpec::Lz77));

        let members = standard_members(1 << 8);
        let memories: Vec<usize> = members
            .iter()
            .filter_map(|m| match m {
                CodeSpec::Krichevsky { memory, .. } => Some(*memory),
                _ => None,
            })
            .collect();
        assert_eq!(memories, vec![0, 1, 2, 3]);
    }

    #[test]
    fn default_battery_budget_stays_within_alpha() {
        for n in [64usize, 256, 1 << 16, 1 << 20] {
            let config = default_battery(n, 0.01);
            assert!(config.alpha_budget() <= 0.01 + 1e-12);
            assert_eq!(config.members.len(), config.weights.len());
        }
    }

    #[test]
    #[should_panic(expected = "at least 64 bits")]
    fn default_battery_rejects_short_inputs() {
        default_battery(32, 0.01);
    }

    #[test]
    fn battery_verdicts_follow_members() {
        // Pseudo-random-looking short word: every member accepts.
        let bits: Vec<u8> = (0..256).map(|i| ((i * 7 + i / 3) % 2) as u8).collect();
        let calm = BatteryConfig::new(
            0.01,
            vec![
                CodeSpec::Krichevsky {
                    memory: 0,
                    block_len: 256,
                },
                CodeSpec::Mixture {
                    max_order: 3,
                    block_len: 256,
                },
                CodeSpec::Lz77,
            ],
            default_weights(3),
        );
        let report = run_battery(&bits, &calm);
        if report
            .decisions
            .iter()
            .all(|d| d.verdict == Verdict::Random)
        {
            assert_eq!(report.verdict, Verdict::Random);
        }

        // All-zero input: the Krichevsky member certainly rejects, and one
        // rejection decides the battery.
        let zeros = vec![0u8; 1024];
        let report = run_battery(&zeros, &default_battery(1024, 0.01));
        assert!(report
            .decisions
            .iter()
            .any(|d| d.verdict == Verdict::NonRandom));
        assert_eq!(report.verdict, Verdict::NonRandom);
    }

    #[test]
    fn all_zeros_rejected_by_any_krichevsky_test() {
        let zeros = vec![0u8; 1024];
        for memory in [0usize, 1, 3] {
            let decision = run_test(
                &zeros,
                &CodeSpec::Krichevsky {
                    memory,
                    block_len: 1024,
                },
                0.01,
            );
            assert_eq!(decision.verdict, Verdict::NonRandom, "m={memory}");
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let bits: Vec<u8> = (0..512).map(|i| ((i ^ (i >> 3)) % 2) as u8).collect();
        let config = default_battery(512, 0.05);
        let a = run_battery(&bits, &config);
        let b = run_battery(&bits, &config);
        assert_eq!(a, b);
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
    }
}
