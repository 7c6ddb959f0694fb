"""Fixed table of the theorem statements that verdicts rest on."""

CITATIONS = {
    "spectral": "spectrum of M_phi is the closure of phi(D); sup|phi| > 1 rules out PB, CB and UKB",
    "large_alpha": "alpha >= 1: PB, CB and UKB of M_phi and its adjoint are each equivalent to sup|phi| <= 1",
    "pb_ubscm": "alpha < 1: M_phi is PB iff sup|phi| <= 1 and |(phi^n)'|^2 (1-|z|^2)^alpha dA "
                "is a uniformly bounded sequence of Carleson measures",
    "cb_ubscm": "alpha < 1: M_phi is CB iff phi = 1, or sup|phi| <= 1 and the Cesaro-symbol derivative "
                "measures form a uniformly bounded sequence of Carleson measures",
    "ukb_ubscm": "alpha < 1: M_phi is UKB iff the Cesaro-symbol measures are uniformly bounded over n and |lambda| = 1",
    "me_cb": "multipliers on D_alpha, -1 < alpha < 1: M_phi is mean ergodic iff it is Cesaro bounded",
    "adjoint_me": "adjoint multipliers: ME iff CB, given int|phi'|^2 dA < inf (0 < alpha < 1) "
                  "or int log(1/(1-|z|^2)) |phi'|^2 dA < inf (alpha = 0)",
    "pb_integral": "sufficient for PB: int |phi'|^2/(1-|phi|^2)^2 dA < inf (0 < alpha < 1), "
                   "log-weighted version at alpha = 0",
    "cb_integral": "sufficient for CB: int |phi'/(1-phi)|^2 dA < inf (0 < alpha < 1), "
                   "log-weighted version at alpha = 0",
    "ukb_integral": "sufficient for UKB: int |phi'/(1-lambda phi)|^2 dA bounded uniformly in |lambda| = 1 "
                    "(0 < alpha < 1), log-weighted version at alpha = 0",
    "shift": "M_z on D_alpha: ||M_z^n|| = (n+1)^((1-alpha)/2); UKB for alpha > 0, not CB for alpha < 0",
    "assani": "the matrix [[-1,2],[0,-1]] is Cesaro bounded but not power bounded",
    "backward_shift": "backward shift with weights (k/(k-1))^a on l^2: ACB but not PB for 0 < a < 1/2, not CB at a = 1/2",
    "tz_block": "[[B, B-I], [0, B]] with B the backward shift satisfies ||T^n||/n >= 2",
    "power_half": "e^(i theta) (1-z)/2, theta != 0, on D_0 is ME but not PB; ||((1-z)/2)^m||^2 grows like sqrt(m)",
    "cusp": "e^(i theta) (1-z)/2 exp(-(1+z)/(1-z)) is Cesaro bounded on D_0",
    "acb": "absolutely Cesaro bounded: (1/N) sum_{j<=N} ||T^j x|| <= C ||x||; ACB implies CB",
    "carleson": "a Carleson measure for D_alpha satisfies int |g|^2 dmu <= C ||g||^2",
}


def cite(key: str) -> str:
    return CITATIONS[key]
