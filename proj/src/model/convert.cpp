#include "thermopan/model/convert.hpp"

#include <algorithm>
#include <stdexcept>

namespace thermopan::model {

Tensor<float> to_tensor(const ImageF32& img) {
    const auto px = img.pixels();
    return Tensor<float>({1, img.channels(), img.height(), img.width()}, std::vector<float>(px.begin(), px.end()));
}

Tensor<float> stack(const std::vector<const ImageF32*>& images) {
    if (images.empty()) throw std::invalid_argument("stack: no images");
    const ImageF32& first = *images.front();
    Tensor<float> t({static_cast<int>(images.size()), first.channels(), first.height(), first.width()});
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (!images[i]->same_shape(first)) throw std::invalid_argument("stack: images differ in shape");
        std::copy_n(images[i]->pixels().data(), first.size(), t.data() + i * first.size());
    }
    return t;
}

ImageF32 to_image(const Tensor<float>& t, int n) {
    if (t.rank() != 4 || n < 0 || n >= t.n()) throw std::invalid_argument("to_image: bad tensor or index");
    const std::size_t count = static_cast<std::size_t>(t.c()) * t.plane_size();
    const float* src = t.data() + static_cast<std::size_t>(n) * count;
    return ImageF32(t.h(), t.w(), t.c(), std::vector<float>(src, src + count));
}

}  // namespace thermopan::model
