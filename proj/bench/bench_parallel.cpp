// Serial reference loop vs the OpenMP kernel on two workloads.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "switchdiff/montecarlo.hpp"
#include "switchdiff/verify.hpp"

using namespace switchdiff;

namespace {

template <class F>
double seconds(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ValidatedModel make_model(double lp, double lm, double rp, double rm) {
    ModelSpec s;
    s.lambda_plus = lp;
    s.lambda_minus = lm;
    s.r_plus = rp;
    s.r_minus = rm;
    s.drift_plus = ConstantDrift{rp};
    s.drift_minus = ConstantDrift{-rm};
    s.sup_b_plus = rp;
    s.sup_b_minus = rm;
    s.z0 = Regime::minus;
    return validate(s);
}

bool same(const std::vector<BoundReport>& a, const std::vector<BoundReport>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!(a[i].estimate == b[i].estimate)) return false;
    return true;
}

void report(const char* name, double serial, double parallel, bool identical, int threads) {
    std::printf("%-28s serial %8.3f s   openmp(%d) %8.3f s   speedup %5.2fx   identical: %s\n", name, serial,
                threads, parallel, serial / parallel, identical ? "yes" : "NO");
}

}  // namespace

int main(int argc, char** argv) {
    const std::size_t n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 200000;
    const int threads = argc > 2 ? std::atoi(argv[2]) : 0;
    bool ok = true;

    {
        const auto model = make_model(1.0, 1.0, 1.0, 1.0);
        std::vector<BoundReport> s, p;
        const double ts = seconds([&] { s = verify_mgf(model, {0.05, 0.1, 0.2}, {1, 3, 5}, n, 7, {threads, 0.999, true}, false); });
        const double tp = seconds([&] { p = verify_mgf(model, {0.05, 0.1, 0.2}, {1, 3, 5}, n, 7, {threads, 0.999, false}, false); });
        report("skeleton mgf", ts, tp, same(s, p), threads);
        ok = ok && same(s, p);
    }
    {
        const auto model = make_model(1.0, 2.0, 1.0, 1.0);
        const std::size_t paths = n / 100 + 2;
        const SimConfig em{Integrator::euler_maruyama, 0.01};
        BoundReport s, p;
        const double ts = seconds([&] { s = verify_velocity(model, 100.0, paths, 7, em, {threads, 0.999, true}); });
        const double tp = seconds([&] { p = verify_velocity(model, 100.0, paths, 7, em, {threads, 0.999, false}); });
        report("euler-maruyama velocity", ts, tp, s.estimate == p.estimate, threads);
        ok = ok && s.estimate == p.estimate;
    }
    return ok ? 0 : 1;
}
