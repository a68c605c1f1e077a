//! Report rendering and test-spec parsing for the `codelen` binary.

use codelen::mixture::DEFAULT_MAX_ORDER_CAP;
use codelen::testkit::{BatteryReport, CodeSpec};
use serde::{Deserialize, Serialize};

/// Version of the JSON report schema.
pub const REPORT_VERSION: u32 = 1;

/// The JSON document emitted by `analyze`: a schema version plus the full
/// battery report (every member decision carries its code parameters, n,
/// code length, tau, threshold, level and p-bound, so decisions can be
/// recomputed offline).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonReport {
    pub version: u32,
    #[serde(flatten)]
    pub report: BatteryReport,
}

pub fn render_json(report: &BatteryReport) -> String {
    let doc = JsonReport {
        version: REPORT_VERSION,
        report: report.clone(),
    };
    serde_json::to_string_pretty(&doc).expect("report serialization cannot fail")
}

pub fn render_text(report: &BatteryReport) -> String {
    let mut out = String::new();
    let n = report.decisions.first().map_or(0, |d| d.n);
    out.push_str(&format!(
        "input: {n} bits    alpha: {}    budget sum(alpha_i): {:.6}\n",
        report.alpha, report.alpha_budget
    ));
    out.push_str(&format!(
        "{:<26} {:>10} {:>8} {:>10} {:>12} {:>12}  verdict\n",
        "test", "codelength", "tau", "threshold", "alpha_i", "p-bound"
    ));
    for decision in &report.decisions {
        out.push_str(&format!(
            "{:<26} {:>10} {:>8} {:>10.4} {:>12.3e} {:>12}  {}\n",
            decision.test_name,
            decision.codelength,
            decision.tau,
            decision.threshold,
            decision.alpha,
            format!("p<={:.3e}", decision.p_bound),
            decision.verdict
        ));
    }
    out.push_str(&format!("battery verdict: {}\n", report.verdict));
    out
}

/// Parses a single-test spec:
///
/// - `kt:m=<memory>[,t=<block>]` (also `krichevsky:...`)
/// - `mixture[:M=<max order>][,t=<block>]` (also `mix:...`)
/// - `lz77` (also `lz`)
///
/// Defaults: t = min(n, 2^14), M = min(12, floor(log2 t)).
pub fn parse_test_spec(spec: &str, n: usize) -> Result<CodeSpec, String> {
    let default_block = n.clamp(1, 1 << 14);
    let (head, args) = match spec.split_once(':') {
        Some((head, args)) => (head, Some(args)),
        None => (spec, None),
    };
    let mut memory: Option<usize> = None;
    let mut max_order: Option<usize> = None;
    let mut block_len: Option<usize> = None;
    if let Some(args) = args {
        for part in args.split(',') {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got {part:?}"))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| format!("not a number: {value:?}"))?;
            match key.trim() {
                "m" => memory = Some(value),
                "M" | "max" => max_order = Some(value),
                "t" => block_len = Some(value),
                other => return Err(format!("unknown parameter {other:?}")),
            }
        }
    }
    let block_len = block_len.unwrap_or(default_block);
    if block_len == 0 {
        return Err("block length must be positive".into());
    }
    match head.trim() {
        "kt" | "krichevsky" => {
            let memory = memory.ok_or("krichevsky test needs m=<memory>")?;
            Ok(CodeSpec::Krichevsky { memory, block_len })
        }
        "mix" | "mixture" => Ok(CodeSpec::Mixture {
            max_order: max_order
                .unwrap_or_else(|| DEFAULT_MAX_ORDER_CAP.min(block_len.ilog2() as usize)),
            block_len,
        }),
        "lz" | "lz77" => {
            if memory.is_some() || max_order.is_some() || block_len != default_block {
                return Err("lz77 takes no parameters".into());
            }
            Ok(CodeSpec::Lz77)
        }
        other => Err(format!(
            "unknown test {other:?}; expected kt, mixture or lz77"
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_grammar() {
        assert_eq!(
            parse_test_spec("kt:m=3", 1 << 20).unwrap(),
            CodeSpec::Krichevsky {
                memory: 3,
                block_len: 1 << 14
            }
        );
        assert_eq!(
            parse_test_spec("krichevsky:m=0,t=512", 4096).unwrap(),
            CodeSpec::Krichevsky {
                memory: 0,
                block_len: 512
            }
        );
        assert_eq!(
            parse_test_spec("mixture", 4096).unwrap(),
            CodeSpec::Mixture {
                max_order: 12,
                block_len: 4096
            }
        );
        assert_eq!(
            parse_test_spec("mixture", 1024).unwrap(),
            CodeSpec::Mixture {
                max_order: 10,
                block_len: 1024
            }
        );
        assert_eq!(
            parse_test_spec("mix:M=4,t=256", 4096).unwrap(),
            CodeSpec::Mixture {
                max_order: 4,
                block_len: 256
            }
        );
        assert_eq!(parse_test_spec("lz77", 100).unwrap(), CodeSpec::Lz77);
        assert!(parse_test_spec("kt", 100).is_err());
        assert!(parse_test_spec("lz77:m=1", 100).is_err());
        assert!(parse_test_spec("huffman", 100).is_err());
    }
}
