#include "lst/frontend.hpp"

namespace lst {

const std::string& prelude_source() {
  static const std::string src = R"(-- prelude

fun sumFrom{acc : Int}(xs : Int*) : Int =
  case xs of
    nil => {acc}
  | y :: ys => wait y do sumFrom{acc + y}(ys) end

fun sum(xs : Int*) : Int = sumFrom{0}(xs)

fun lengthFrom[s]{n : Int}(xs : s*) : Int =
  case xs of
    nil => {n}
  | y :: ys => lengthFrom{n + 1}(ys)

fun length[s](xs : s*) : Int = lengthFrom[s]{0}(xs)

-- The longest prefix of elements above t, then the rest of the stream
-- starting at the first element that is not.
fun spanGt{t : Int}(xs : Int*) : Int* . Int* =
  case xs of
    nil => (nil; nil)
  | y :: ys => wait y do
                 if {y > t} then
                   let (run; rest) = spanGt{t}(ys) in
                   ({y} :: run; rest)
                 else
                   (nil; {y} :: ys)
               end
)";
  return src;
}

}  // namespace lst
