#include "zerotwo/experiment.hpp"

namespace zerotwo {

namespace {

// Shipped experiment configs, one per exercised statement: dominance
// propagation, the multi-parameter law and both corollaries, the classical
// meet condition, disintegration with center-valued norms, the bundle
// order limit, the dichotomy itself on both branches, and the GNS fiber.

const char* kDichotomyQubitDepolarizing = R"json({
  "name": "dichotomy-qubit-depolarizing",
  "experiment": "dichotomy",
  "seed": 1,
  "algebra": {"blocks": [{"dim": 2}]},
  "channels": {"T": {"kind": "depolarizing", "p": 0.3}},
  "params": {"family": ["T"], "k": [1]},
  "schedule": {"n_max": 20},
  "eps": 0.001,
  "expect": {"classification": "converges-to-zero"}
})json";

const char* kDichotomySwapConjugation = R"json({
  "name": "dichotomy-swap-conjugation",
  "experiment": "dichotomy",
  "seed": 1,
  "algebra": {"blocks": [{"dim": 2}]},
  "channels": {
    "T": {
      "kind": "kraus",
      "operators": [[[[[0, 0], [1, 0]], [[1, 0], [0, 0]]]]],
      "require_tp": true
    }
  },
  "params": {"family": ["T"], "k": [1]},
  "schedule": {"n_max": 12},
  "eps": 0.001,
  "expect": {"classification": "stays-near-two"}
})json";

const char* kZn0HalvedStochastic = R"json({
  "name": "zn0-halved-stochastic",
  "experiment": "zn0",
  "seed": 1,
  "algebra": {"blocks": [{"dim": 1}, {"dim": 1}, {"dim": 1}]},
  "channels": {
    "S": {
      "kind": "stochastic",
      "matrix": [[0.8, 0.1, 0.1], [0.1, 0.8, 0.15], [0.1, 0.1, 0.75]]
    },
    "T": {"kind": "scale", "factor": 0.5, "channel": {"ref": "S"}}
  },
  "params": {"T": "T", "S": "S", "n0": 1, "N": 20}
})json";

const char* kCorollary13SingleDepolarizing = R"json({
  "name": "corollary13-single-depolarizing",
  "experiment": "theorem12",
  "seed": 1,
  "algebra": {"blocks": [{"dim": 2}]},
  "channels": {
    "T": {"kind": "depolarizing", "p": 0.3},
    "S": {"kind": "scale", "factor": 0.5, "channel": {"ref": "T"}}
  },
  "params": {"family": ["T"], "S": "S", "m": [1], "k": [1]},
  "eps": 0.1
})json";

const char* kTheorem12DepolarizingPair = R"json({
  "name": "theorem12-depolarizing-pair",
  "experiment": "theorem12",
  "seed": 1,
  "algebra": {"blocks": [{"dim": 2}]},
  "channels": {
    "T1": {"kind": "depolarizing", "p": 0.3},
    "T2": {"kind": "depolarizing", "p": 0.3},
    "S": {
      "kind": "scale",
      "factor": 0.5,
      "channel": {"kind": "compose", "channels": [{"ref": "T1"}, {"ref": "T2"}]}
    }
  },
  "params": {"family": ["T1", "T2"], "S": "S", "m": [1, 1], "k": [1, 0]},
  "eps": 0.1
})json";

const char* kCorollary14CommutingPair = R"json({
  "name": "corollary14-commuting-pair",
  "experiment": "corollary14",
  "seed": 1,
  "algebra": {"blocks": [{"dim": 2}]},
  "channels": {
    "T": {"kind": "depolarizing", "p": 0.3},
    "Smap": {"kind": "depolarizing", "p": 0.5},
    "Sdom": {
      "kind": "scale",
      "factor": 0.5,
      "channel": {"kind": "compose", "channels": [{"ref": "T"}, {"ref": "Smap"}]}
    }
  },
  "params": {"T": "T", "S_map": "Smap", "S_dom": "Sdom", "m0": 1, "k": 1,
             "table_max": 12},
  "eps": 0.5
})json";

const char* kZaharopolPositive3x3 = R"json({
  "name": "zaharopol-positive-3x3",
  "experiment": "zaharopol",
  "seed": 1,
  "algebra": {"blocks": [{"dim": 1}, {"dim": 1}, {"dim": 1}]},
  "channels": {
    "T": {
      "kind": "stochastic",
      "matrix": [[0.8, 0.1, 0.1], [0.1, 0.8, 0.15], [0.1, 0.1, 0.75]]
    }
  },
  "params": {"T": "T", "m": 1},
  "schedule": {"n_max": 64},
  "eps": 0.001
})json";

const char* kZaharopolTwoCycle = R"json({
  "name": "zaharopol-two-cycle",
  "experiment": "zaharopol",
  "seed": 1,
  "algebra": {"blocks": [{"dim": 1}, {"dim": 1}]},
  "channels": {
    "T": {"kind": "stochastic", "matrix": [[0, 1], [1, 0]]}
  },
  "params": {"T": "T", "m": 1},
  "schedule": {"n_max": 16},
  "eps": 0.001
})json";

const char* kBundleDisintegrationNorms = R"json({
  "name": "bundle-disintegration-norms",
  "experiment": "bundle-order-limit",
  "seed": 1,
  "bundle": {
    "atoms": [
      {"label": "w1", "mass": 1.0, "blocks": [{"dim": 2}]},
      {"label": "w2", "mass": 0.5, "blocks": [{"dim": 2}]},
      {"label": "w3", "mass": 2.0, "blocks": [{"dim": 2}]}
    ]
  },
  "params": {
    "T": {
      "fibers": {
        "w1": {"kind": "depolarizing", "p": 0.2},
        "w2": {"kind": "depolarizing", "p": 0.4},
        "w3": {"kind": "depolarizing", "p": 0.6}
      }
    },
    "S": {
      "fibers": {
        "w1": {"kind": "scale", "factor": 0.5,
               "channel": {"kind": "depolarizing", "p": 0.2}},
        "w2": {"kind": "scale", "factor": 0.5,
               "channel": {"kind": "depolarizing", "p": 0.4}},
        "w3": {"kind": "scale", "factor": 0.5,
               "channel": {"kind": "depolarizing", "p": 0.6}}
      }
    },
    "m": 1,
    "k": 1
  },
  "schedule": {"n_max": 32},
  "eps": 0.001
})json";

const char* kBundleOrderLimitDepolarizing = R"json({
  "name": "bundle-order-limit-depolarizing",
  "experiment": "bundle-order-limit",
  "seed": 1,
  "bundle": {
    "atoms": [
      {"label": "w1", "mass": 1.0, "blocks": [{"dim": 2}]},
      {"label": "w2", "mass": 1.0, "blocks": [{"dim": 2}]}
    ]
  },
  "params": {
    "T": {
      "fibers": {
        "w1": {"kind": "depolarizing", "p": 0.2},
        "w2": {"kind": "depolarizing", "p": 0.5}
      }
    },
    "S": {
      "fibers": {
        "w1": {"kind": "scale", "factor": 0.5,
               "channel": {"kind": "depolarizing", "p": 0.2}},
        "w2": {"kind": "scale", "factor": 0.5,
               "channel": {"kind": "depolarizing", "p": 0.5}}
      }
    },
    "m": 1,
    "k": 1
  },
  "schedule": {"n_max": 32},
  "eps": 0.001
})json";

const char* kGnsM2StandardTrace = R"json({
  "name": "gns-m2-standard-trace",
  "experiment": "gns",
  "seed": 1,
  "algebra": {"blocks": [{"dim": 2}]},
  "params": {"phi": [1.0]}
})json";

const char* kNormDepolarizingStep = R"json({
  "name": "norm-depolarizing-step",
  "experiment": "norm",
  "seed": 1,
  "algebra": {"blocks": [{"dim": 2}]},
  "channels": {"T": {"kind": "depolarizing", "p": 0.3}},
  "params": {
    "channel": {"kind": "power", "exponent": 2, "channel": {"ref": "T"}},
    "subtract": {"ref": "T"}
  }
})json";

}  // namespace

const std::vector<ExampleConfig>& example_configs() {
  static const std::vector<ExampleConfig> examples = {
      {"dichotomy-qubit-depolarizing", kDichotomyQubitDepolarizing},
      {"dichotomy-swap-conjugation", kDichotomySwapConjugation},
      {"zn0-halved-stochastic", kZn0HalvedStochastic},
      {"corollary13-single-depolarizing", kCorollary13SingleDepolarizing},
      {"theorem12-depolarizing-pair", kTheorem12DepolarizingPair},
      {"corollary14-commuting-pair", kCorollary14CommutingPair},
      {"zaharopol-positive-3x3", kZaharopolPositive3x3},
      {"zaharopol-two-cycle", kZaharopolTwoCycle},
      {"bundle-disintegration-norms", kBundleDisintegrationNorms},
      {"bundle-order-limit-depolarizing", kBundleOrderLimitDepolarizing},
      {"gns-m2-standard-trace", kGnsM2StandardTrace},
      {"norm-depolarizing-step", kNormDepolarizingStep},
  };
  return examples;
}

}  // namespace zerotwo
