#include "isac/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace isac {

namespace {

class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(int n, int sign) {
        std::lock_guard lock(mutex_);
        auto it = plans_.find({n, sign});
        if (it != plans_.end()) return it->second;
        fftw_complex* buf = fftw_alloc_complex(static_cast<std::size_t>(n));
        fftw_plan p = fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(buf);
        plans_.emplace(std::make_pair(n, sign), p);
        return p;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

void run(std::span<std::complex<double>> data, int sign) {
    if (data.empty()) return;
    fftw_plan p = cache().get(static_cast<int>(data.size()), sign);
    auto* d = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(p, d, d);
}

}  // namespace

void fft_forward(std::span<std::complex<double>> data) { run(data, FFTW_FORWARD); }
void fft_backward(std::span<std::complex<double>> data) { run(data, FFTW_BACKWARD); }

}  // namespace isac
