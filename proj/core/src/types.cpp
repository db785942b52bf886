#include "banditlab/types.hpp"

#include <stdexcept>

namespace banditlab {

FeedbackKind kind_of(const Feedback& fb) {
  switch (fb.index()) {
    case 0: return FeedbackKind::BanditReward;
    case 1: return FeedbackKind::FullCosts;
    case 2: return FeedbackKind::SemiBandit;
    default: return FeedbackKind::OutcomeRow;
  }
}

void History::append(ArmIndex arm, Feedback fb) {
  records_.push_back(RoundRecord{static_cast<int>(records_.size()) + 1, arm, std::move(fb)});
}

}  // namespace banditlab
