#include "foliation/integrator.hpp"

#include <algorithm>
#include <cmath>

namespace foliation {

const char* to_string(FlowStatus s)
{
    switch (s) {
    case FlowStatus::completed: return "completed";
    case FlowStatus::exited_domain: return "exited_domain";
    case FlowStatus::step_underflow: return "step_underflow";
    case FlowStatus::step_limit: return "step_limit";
    }
    return "?";
}

namespace {

// Dormand-Prince 8(5,3) coefficients
constexpr double c2 = 0.526001519587677318785587544488E-01, c3 = 0.789002279381515978178381316732E-01,
                 c4 = 0.118350341907227396726757197510E+00, c5 = 0.281649658092772603273242802490E+00,
                 c6 = 0.333333333333333333333333333333E+00, c7 = 0.25E+00, c8 = 0.307692307692307692307692307692E+00,
                 c9 = 0.651282051282051282051282051282E+00, c10 = 0.6E+00, c11 = 0.857142857142857142857142857142E+00;
constexpr double b1 = 5.42937341165687622380535766363E-2, b6 = 4.45031289275240888144113950566E0,
                 b7 = 1.89151789931450038304281599044E0, b8 = -5.8012039600105847814672114227E0,
                 b9 = 3.1116436695781989440891606237E-1, b10 = -1.52160949662516078556178806805E-1,
                 b11 = 2.01365400804030348374776537501E-1, b12 = 4.47106157277725905176885569043E-2;
constexpr double a21 = 5.26001519587677318785587544488E-2, a31 = 1.97250569845378994544595329183E-2,
                 a32 = 5.91751709536136983633785987549E-2, a41 = 2.95875854768068491816892993775E-2,
                 a43 = 8.87627564304205475450678981324E-2, a51 = 2.41365134159266685502369798665E-1,
                 a53 = -8.84549479328286085344864962717E-1, a54 = 9.24834003261792003115737966543E-1,
                 a61 = 3.7037037037037037037037037037E-2, a64 = 1.70828608729473871279604482173E-1,
                 a65 = 1.25467687566822425016691814123E-1, a71 = 3.7109375E-2,
                 a74 = 1.70252211019544039314978060272E-1, a75 = 6.02165389804559606850219397283E-2,
                 a76 = -1.7578125E-2;
constexpr double a81 = 3.70920001185047927108779319836E-2, a84 = 1.70383925712239993810214054705E-1,
                 a85 = 1.07262030446373284651809199168E-1, a86 = -1.53194377486244017527936158236E-2,
                 a87 = 8.27378916381402288758473766002E-3, a91 = 6.24110958716075717114429577812E-1,
                 a94 = -3.36089262944694129406857109825E0, a95 = -8.68219346841726006818189891453E-1,
                 a96 = 2.75920996994467083049415600797E1, a97 = 2.01540675504778934086186788979E1,
                 a98 = -4.34898841810699588477366255144E1, a101 = 4.77662536438264365890433908527E-1,
                 a104 = -2.48811461997166764192642586468E0, a105 = -5.90290826836842996371446475743E-1,
                 a106 = 2.12300514481811942347288949897E1, a107 = 1.52792336328824235832596922938E1,
                 a108 = -3.32882109689848629194453265587E1, a109 = -2.03312017085086261358222928593E-2;
constexpr double a111 = -9.3714243008598732571704021658E-1, a114 = 5.18637242884406370830023853209E0,
                 a115 = 1.09143734899672957818500254654E0, a116 = -8.14978701074692612513997267357E0,
                 a117 = -1.85200656599969598641566180701E1, a118 = 2.27394870993505042818970056734E1,
                 a119 = 2.49360555267965238987089396762E0, a1110 = -3.0467644718982195003823669022E0,
                 a121 = 2.27331014751653820792359768449E0, a124 = -1.05344954667372501984066689879E1,
                 a125 = -2.00087205822486249909675718444E0, a126 = -1.79589318631187989172765950534E1,
                 a127 = 2.79488845294199600508499808837E1, a128 = -2.85899827713502369474065508674E0,
                 a129 = -8.87285693353062954433549289258E0, a1210 = 1.23605671757943030647266201528E1,
                 a1211 = 6.43392746015763530355970484046E-1;
constexpr double bhh1 = 0.244094488188976377952755905512E+00, bhh2 = 0.733846688281611857341361741547E+00,
                 bhh3 = 0.220588235294117647058823529412E-01;
constexpr double er1 = 0.1312004499419488073250102996E-01, er6 = -0.1225156446376204440720569753E+01,
                 er7 = -0.4957589496572501915214079952E+00, er8 = 0.1664377182454986536961530415E+01,
                 er9 = -0.3503288487499736816886487290E+00, er10 = 0.3341791187130174790297318841E+00,
                 er11 = 0.8192320648511571246570742613E-01, er12 = -0.2235530786388629525884427845E-01;

struct Stages {
    CVector k1, k2, k3, k4, k5, k6, k7, k8, k9, k10, tmp;
    explicit Stages(Eigen::Index n)
        : k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), k8(n), k9(n), k10(n), tmp(n) {}
};

// One 12-stage step from w with k1 = f(w) already set; returns the new state and the scaled error.
double step12(const ComplexRhs& f, const CVector& w, double h, Stages& s, CVector& out, const Dop853Options& o)
{
    s.tmp = w + h * a21 * s.k1;
    f(s.tmp, s.k2);
    s.tmp = w + h * (a31 * s.k1 + a32 * s.k2);
    f(s.tmp, s.k3);
    s.tmp = w + h * (a41 * s.k1 + a43 * s.k3);
    f(s.tmp, s.k4);
    s.tmp = w + h * (a51 * s.k1 + a53 * s.k3 + a54 * s.k4);
    f(s.tmp, s.k5);
    s.tmp = w + h * (a61 * s.k1 + a64 * s.k4 + a65 * s.k5);
    f(s.tmp, s.k6);
    s.tmp = w + h * (a71 * s.k1 + a74 * s.k4 + a75 * s.k5 + a76 * s.k6);
    f(s.tmp, s.k7);
    s.tmp = w + h * (a81 * s.k1 + a84 * s.k4 + a85 * s.k5 + a86 * s.k6 + a87 * s.k7);
    f(s.tmp, s.k8);
    s.tmp = w + h * (a91 * s.k1 + a94 * s.k4 + a95 * s.k5 + a96 * s.k6 + a97 * s.k7 + a98 * s.k8);
    f(s.tmp, s.k9);
    s.tmp = w + h * (a101 * s.k1 + a104 * s.k4 + a105 * s.k5 + a106 * s.k6 + a107 * s.k7 + a108 * s.k8 + a109 * s.k9);
    f(s.tmp, s.k10);
    s.tmp = w + h * (a111 * s.k1 + a114 * s.k4 + a115 * s.k5 + a116 * s.k6 + a117 * s.k7 + a118 * s.k8 + a119 * s.k9 +
                     a1110 * s.k10);
    f(s.tmp, s.k2);
    s.tmp = w + h * (a121 * s.k1 + a124 * s.k4 + a125 * s.k5 + a126 * s.k6 + a127 * s.k7 + a128 * s.k8 + a129 * s.k9 +
                     a1210 * s.k10 + a1211 * s.k2);
    f(s.tmp, s.k3);
    s.k4 = b1 * s.k1 + b6 * s.k6 + b7 * s.k7 + b8 * s.k8 + b9 * s.k9 + b10 * s.k10 + b11 * s.k2 + b12 * s.k3;
    out = w + h * s.k4;

    double err = 0.0, err2 = 0.0;
    const auto n = w.size();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double sk = 1.0 / (o.atol + o.rtol * std::max(std::abs(w(i)), std::abs(out(i))));
        const Complex e2 = s.k4(i) - bhh1 * s.k1(i) - bhh2 * s.k9(i) - bhh3 * s.k3(i);
        const Complex e1 = er1 * s.k1(i) + er6 * s.k6(i) + er7 * s.k7(i) + er8 * s.k8(i) + er9 * s.k9(i) +
                           er10 * s.k10(i) + er11 * s.k2(i) + er12 * s.k3(i);
        err2 += std::norm(e2) * sk * sk;
        err += std::norm(e1) * sk * sk;
    }
    const double deno = err + 0.01 * err2;
    return std::abs(h) * err * std::sqrt(1.0 / (deno <= 0.0 ? static_cast<double>(n) : deno * static_cast<double>(n)));
}

}  // namespace

RayIntegration dop853_integrate(const ComplexRhs& rhs, CVector w0, double length, const Dop853Options& opts,
                                const Region& inside)
{
    RayIntegration res;
    res.state = std::move(w0);
    if (!(length > 0.0)) return res;
    const auto n = res.state.size();
    Stages s(n);
    CVector next(n), knew(n);
    rhs(res.state, s.k1);

    constexpr double safe = 0.9, fac1 = 0.333, fac2 = 6.0, beta = 0.0;
    constexpr double expo1 = 1.0 / 8.0 - beta * 0.2;
    double facold = 1e-4;
    // initial step from the field size
    const double fnorm = s.k1.norm(), wnorm = res.state.norm();
    double h = (fnorm > 0.0) ? std::min(length, 0.01 * std::max(wnorm, 1e-3) / fnorm) : length;
    h = std::max(h, 1e-14 * length);
    bool reject = false, shrinking_for_exit = false;
    double t = 0.0;
    while (true) {
        if (res.steps >= opts.max_steps) {
            res.status = FlowStatus::step_limit;
            break;
        }
        if (h <= 1e-14 * std::max(1.0, t) || h <= 1e-13 * length) {
            res.status = shrinking_for_exit ? FlowStatus::exited_domain : FlowStatus::step_underflow;
            break;
        }
        bool last = false;
        if (t + 1.01 * h >= length) {
            h = length - t;
            last = true;
        }
        ++res.steps;
        const double err = step12(rhs, res.state, h, s, next, opts);
        if (!std::isfinite(err)) {
            h *= 0.25;
            reject = true;
            continue;
        }
        const double fac11 = std::pow(err, expo1);
        double fac = fac11 / std::pow(facold, beta);
        fac = std::max(1.0 / fac2, std::min(1.0 / fac1, fac / safe));
        double hnew = h / fac;
        if (err <= 1.0) {
            if (inside && !inside(next)) {
                // locate the exit by halving instead of stepping across the boundary
                shrinking_for_exit = true;
                res.stayed_inside = false;
                h *= 0.5;
                continue;
            }
            facold = std::max(err, 1e-4);
            rhs(next, knew);
            s.k1 = knew;
            res.state = next;
            t += h;
            res.tau = t;
            if (last) {
                res.status = FlowStatus::completed;
                break;
            }
            if (shrinking_for_exit) hnew = std::min(hnew, h);
            if (reject) hnew = std::min(hnew, h);
            reject = false;
            h = hnew;
        } else {
            h = h / std::min(1.0 / fac1, fac11 / safe);
            reject = true;
        }
    }
    res.stayed_inside = res.status != FlowStatus::exited_domain;
    return res;
}

}  // namespace foliation
