#include <benchmark/benchmark.h>

#include "patchdg/bench_problems.hpp"
#include "patchdg/dg_system.hpp"
#include "patchdg/interface_geometry.hpp"
#include "patchdg/patch_reconstruction.hpp"
#include "patchdg/solver.hpp"

using namespace patchdg;

namespace {

// Arguments: subdivisions n, degree m.
void BM_Classify(benchmark::State& state) {
  const NamedProblem p = example1();
  const Mesh mesh = Mesh::structured(p.domain, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    InterfaceClassification cls(mesh, p.level_set);
    benchmark::DoNotOptimize(cls.cut_elements().data());
  }
  state.counters["elements"] = mesh.num_elements();
}

void BM_Reconstruct(benchmark::State& state) {
  const NamedProblem p = example1();
  const int m = static_cast<int>(state.range(1));
  const Mesh mesh = Mesh::structured(p.domain, static_cast<int>(state.range(0)));
  const InterfaceClassification cls(mesh, p.level_set);
  const ProblemParameters rec = p.recommended(m);
  for (auto _ : state) {
    ReconstructionSpace space(cls, m, rec.patch_size, rec.rule);
    benchmark::DoNotOptimize(space.locals().data());
  }
}

void BM_Assemble(benchmark::State& state) {
  const NamedProblem p = example1();
  const int m = static_cast<int>(state.range(1));
  const Mesh mesh = Mesh::structured(p.domain, static_cast<int>(state.range(0)));
  const InterfaceClassification cls(mesh, p.level_set);
  const ProblemParameters rec = p.recommended(m);
  const ReconstructionSpace space(cls, m, rec.patch_size, rec.rule);
  AssemblyOptions opts;
  opts.penalty.eta = rec.eta;
  for (auto _ : state) {
    LinearSystem sys = assemble_system(space, p.spec, opts);
    benchmark::DoNotOptimize(sys.rhs.data());
  }
  state.counters["dofs"] = space.num_dofs();
}

void BM_Solve(benchmark::State& state) {
  const NamedProblem p = example1();
  const int m = static_cast<int>(state.range(1));
  const Mesh mesh = Mesh::structured(p.domain, static_cast<int>(state.range(0)));
  const InterfaceClassification cls(mesh, p.level_set);
  const ProblemParameters rec = p.recommended(m);
  const ReconstructionSpace space(cls, m, rec.patch_size, rec.rule);
  AssemblyOptions opts;
  opts.penalty.eta = rec.eta;
  const LinearSystem sys = assemble_system(space, p.spec, opts);
  for (auto _ : state) {
    SolveResult r = solve_spd(sys.matrix, sys.rhs);
    benchmark::DoNotOptimize(r.x.data());
  }
  state.counters["nonzeros"] = static_cast<double>(sys.matrix.nonZeros());
}

}  // namespace

BENCHMARK(BM_Classify)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Reconstruct)->Args({20, 2})->Args({40, 2})->Args({40, 3})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Assemble)->Args({20, 2})->Args({40, 2})->Args({40, 3})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Solve)->Args({20, 2})->Args({40, 2})->Args({40, 3})->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
