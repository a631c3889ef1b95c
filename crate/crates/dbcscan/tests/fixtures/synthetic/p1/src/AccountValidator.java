package com.fixture.p1;

import java.util.List;

public class AccountValidator {

  public void validateAccount(List<String> entries, int limit) {
    if (entries.isEmpty()) {
      throw new IllegalArgumentException("no entries");
    }
    if (limit < 0) throw new IllegalStateException();
  }

  public void rethrowAccount() {
    throw new NullPointerException();
  }

  public void loopAccount(int count) {
    if (count > 0) {
      for (int k = 0; k < count; k++) {
        throw new IllegalArgumentException("deep");
      }
    }
  }
}
