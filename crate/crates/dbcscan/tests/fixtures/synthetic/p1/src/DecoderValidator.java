package com.fixture.p1;

import java.util.List;

public class DecoderValidator {

  public void validateDecoder(List<String> entries, int limit) {
    if (entries.isEmpty()) {
      throw new IllegalArgumentException("no entries");
    }
    if (limit < 3) throw new IllegalStateException();
  }

  public void rethrowDecoder() {
    throw new NullPointerException();
  }

  public void loopDecoder(int count) {
    if (count > 0) {
      for (int k = 0; k < count; k++) {
        throw new IllegalArgumentException("deep");
      }
    }
  }
}
