#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "thermopan/frequency.hpp"
#include "thermopan/pansharpen.hpp"
#include "thermopan/preprocess.hpp"

namespace thermopan::cli {

struct PreprocessArgs {
    std::string in;
    std::string out;
    preprocess::PreprocessConfig config;
};

struct DecomposeArgs {
    std::string in;
    std::string lf;
    std::string hf;
    bool thermal = false;
    int depth = 16;
    frequency::KernelSpec kernel;
    preprocess::PreprocessConfig preprocess;
};

struct FuseArgs {
    std::string lf;
    std::string hf;
    std::string out;
    pansharpen::FusionConfig fusion;
};

struct SweepArgs {
    std::string dataset;
    std::string out;
    std::vector<double> lambdas{0, 1, 2, 3, 4, 5};
    frequency::KernelSpec kernel;
    pansharpen::OutOfBand mode = pansharpen::OutOfBand::clip;
};

struct TrainArgs {
    std::string dataset;
    std::string config;
    std::string out;
    std::string history;
    std::vector<std::string> overrides;  ///< key=value, applied after the file
};

struct ColorizeArgs {
    std::string params;
    std::string in;  ///< a thermal file or a directory of them
    std::string out;
    int depth = 8;
    pansharpen::FusionConfig fusion;
    frequency::KernelSpec kernel;
    preprocess::PreprocessConfig preprocess;
};

struct EvaluateArgs {
    std::string pred;
    std::string truth;
    std::string out;
};

struct GenSyntheticArgs {
    std::uint64_t seed = 1;
    int n = 16;
    int size = 64;
    int height = 0;  ///< 0: use size
    int width = 0;
    double spike_probability = 0.001;
    std::string out;
};

void run_preprocess(const PreprocessArgs& a);
void run_decompose(const DecomposeArgs& a);
void run_fuse(const FuseArgs& a);
void run_sweep(const SweepArgs& a);
void run_train(const TrainArgs& a);
void run_colorize(const ColorizeArgs& a);
void run_evaluate(const EvaluateArgs& a);
void run_gen_synthetic(const GenSyntheticArgs& a);

}  // namespace thermopan::cli
