package com.fixture.p1;

import java.util.List;

public class CacheValidator {

  public void validateCache(List<String> entries, int limit) {
    if (entries.isEmpty()) {
      throw new IllegalArgumentException("no entries");
    }
    if (limit < 2) throw new IllegalStateException();
  }

  public void rethrowCache() {
    throw new NullPointerException();
  }

  public void loopCache(int count) {
    if (count > 0) {
      for (int k = 0; k < count; k++) {
        throw new IllegalArgumentException("deep");
      }
    }
  }
}
