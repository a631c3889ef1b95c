package com.fixture.p1;

import androidx.annotation.ColorInt;
import androidx.annotation.NonNull;
import androidx.annotation.Nullable;

public class CardBinder {

  @ColorInt
  private int accentCard;

  public void bindCard(@NonNull String tag, @Size(min = 6) int[] slots) {
  }

  @Nullable
  public String titleCard() {
    return null;
  }
}
