// Serial reference kernels against their OpenMP counterparts. The parallel
// variants take the thread count as the second argument.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "spectail/experiments.hpp"
#include "spectail/matrix_model.hpp"
#include "spectail/specnorm.hpp"

using namespace spectail;

namespace {

Profile wigner(int n) {
    ProfileSpec s;
    s.kind = ProfileKind::wigner;
    s.n = n;
    return build_profile(s);
}

void BM_SampleSerial(benchmark::State& st) {
    const Profile p = wigner(static_cast<int>(st.range(0)));
    std::uint64_t t = 0;
    for (auto _ : st) benchmark::DoNotOptimize(sample_matrix_serial(p, 1, t++));
    st.SetItemsProcessed(st.iterations() * st.range(0) * (st.range(0) + 1) / 2);
}

void BM_SampleParallel(benchmark::State& st) {
    const Profile p = wigner(static_cast<int>(st.range(0)));
    omp_set_num_threads(static_cast<int>(st.range(1)));
    std::uint64_t t = 0;
    for (auto _ : st) benchmark::DoNotOptimize(sample_matrix(p, 1, t++));
    st.SetItemsProcessed(st.iterations() * st.range(0) * (st.range(0) + 1) / 2);
}

void BM_MatvecSerial(benchmark::State& st) {
    const int n = static_cast<int>(st.range(0));
    const Eigen::MatrixXd A = sample_matrix_serial(wigner(n), 2, 0);
    const Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
    Eigen::VectorXd y(n);
    for (auto _ : st) {
        matvec_serial(A, x, y);
        benchmark::DoNotOptimize(y.data());
    }
}

void BM_MatvecParallel(benchmark::State& st) {
    const int n = static_cast<int>(st.range(0));
    const Eigen::MatrixXd A = sample_matrix_serial(wigner(n), 2, 0);
    const Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
    Eigen::VectorXd y(n);
    omp_set_num_threads(static_cast<int>(st.range(1)));
    for (auto _ : st) {
        matvec(A, x, y);
        benchmark::DoNotOptimize(y.data());
    }
}

ExperimentConfig trial_config(int n, int threads) {
    ExperimentConfig c;
    c.profile.kind = ProfileKind::wigner;
    c.profile.n = n;
    c.seed = 3;
    c.threads = threads;
    return c;
}

void BM_TrialsSerial(benchmark::State& st) {
    const ExperimentConfig c = trial_config(static_cast<int>(st.range(0)), 1);
    const Profile p = build_profile(c.profile);
    for (auto _ : st) benchmark::DoNotOptimize(run_trials_serial(p, c, 0, 64));
    st.SetItemsProcessed(st.iterations() * 64);
}

void BM_TrialsParallel(benchmark::State& st) {
    const ExperimentConfig c = trial_config(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
    const Profile p = build_profile(c.profile);
    for (auto _ : st) benchmark::DoNotOptimize(run_trials(p, c, 0, 64));
    st.SetItemsProcessed(st.iterations() * 64);
}

}  // namespace

BENCHMARK(BM_SampleSerial)->Arg(256)->Arg(1024)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_SampleParallel)->ArgsProduct({{256, 1024}, {1, 2, 4}})->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_MatvecSerial)->Arg(512)->Arg(2048)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_MatvecParallel)->ArgsProduct({{512, 2048}, {1, 2, 4}})->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_TrialsSerial)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TrialsParallel)->ArgsProduct({{32, 64}, {1, 2, 4}})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
